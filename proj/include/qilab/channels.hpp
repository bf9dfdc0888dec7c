#pragma once

#include <variant>

#include "qilab/fock.hpp"
#include "qilab/gaussian.hpp"

namespace qilab {

struct PureLoss {
    double eta;  // transmittance in [0, 1]
};

struct Qla {
    double gain;  // G >= 1
};

struct ThermalLoss {
    double eta;  // transmittance in [0, 1]
    double n_b;  // background mean photons >= 0
};

using BosonicChannel = std::variant<PureLoss, Qla, ThermalLoss>;

struct LossGainCascade {
    double eta_tilde;
    double gain;
};

// Thermal loss as pure loss followed by a quantum-limited amplifier:
// G = (1 - eta) N_B + 1, eta~ = eta / G.
LossGainCascade decompose_thermal_loss(double eta, double n_b);

void validate(const BosonicChannel& ch);

// Moment transform on one mode of a Gaussian state.
GaussianState apply_gaussian(const BosonicChannel& ch, const GaussianState& state, int mode);

// Kraus-sum action on one mode of a truncated operator. The operator keeps its
// cutoffs; trace lost past the cutoff beyond trace_tol raises CutoffOverflow.
FockOperator apply_fock(const BosonicChannel& ch, const FockOperator& rho, int mode,
                        double trace_tol = 1e-9);

// Advisory output cutoff from the geometric/negative-binomial tail bound.
int cutoff_for(const BosonicChannel& ch, double input_mean_photons, double tail_tol);

}  // namespace qilab
