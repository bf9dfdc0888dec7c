#pragma once

#include "qilab/distinguish.hpp"
#include "qilab/fock.hpp"
#include "qilab/gaussian.hpp"

namespace qilab {

// No-passive-signature scenario: the background is readjusted to
// N_B / (1 - eta) under H1 so a vacuum probe reveals nothing.
struct NpsScenario {
    double eta = 0.01;
    double n_b = 0.2;
    double n_s = 0.01;
    int cutoff = 0;  // signal-mode Hilbert dimension; <= 0 requests the default
};

struct GaussianMoments1D {
    double mu0, sigma0, mu1, sigma1;
};

struct ThresholdResult {
    double t_star;
    double chi;
};

enum class NpsProbe { Coherent, Tmsv, Spes };

// Default signal cutoff: cutoff_for_tail(N_B/(1-eta), 1e-10) + 3.
int nps_default_cutoff(const NpsScenario& sc);

// sqrt(N_S)|0,1> + sqrt(1-N_S)|1,0> on modes (idler, signal).
FockOperator spes_state(double n_s, int signal_cutoff = 2);

// H0/H1 returned states for an iid SPES probe, built both from the five-term
// closed form and from the loss+amplifier Kraus composition; the two must
// agree elementwise to 1e-10.
std::pair<FockOperator, FockOperator> spes_returned_states(const NpsScenario& sc);

// Gaussian H0/H1 pairs with the NPS-adjusted background.
std::pair<GaussianState, GaussianState> nps_pair(NpsProbe probe, const NpsScenario& sc);

// Per-copy -ln C_1/2; SPES via the Fock route, the rest via the Gaussian one.
double bhattacharyya_exponent_nps(NpsProbe probe, const NpsScenario& sc);

// Return-idler covariance <[a_R,a_I,a_R+,a_I+]^T [a_R+,a_I+,a_R,a_I]> under H1.
Eigen::Matrix4cd ri_covariance(NpsProbe probe, const NpsScenario& sc);

ThresholdResult threshold_exponent(const GaussianMoments1D& m);

// Per-copy photocount moments of the mode-mixing detectors, derived from the
// X/Y-arm operators and the SPES/thermal input correlators.
GaussianMoments1D mmpc_moments(const NpsScenario& sc, double kappa);
GaussianMoments1D mmpdc_moments(const NpsScenario& sc, double kappa);

// Threshold-detector exponents from the exact moments. At kappa = 0 the MMPC
// X arm carries no target signature and the exponent is zero; the quoted
// kappa = 0 optimum is the weak-signal limit below.
double mmpc_exponent(const NpsScenario& sc, double kappa);
double mmpdc_exponent(const NpsScenario& sc, double kappa);

// Weak-signal closed form (1-kappa) eta N_S / (2 [3 N_B - kappa (-N_B^2 +
// 2 N_B + 1) + 1]).
double mmpc_weak_signal_exponent(const NpsScenario& sc, double kappa);
// kappa = 1/2 asymptote eta N_S / (6 N_B + 2).
double mmpdc_weak_signal_exponent(const NpsScenario& sc);

// Limit of the exact-moment MMPC exponent as kappa -> 0+, extracted from a
// small-kappa ladder by a c0 + c1 k + c2/k + c3 sqrt(k) fit. Meaningful in
// the weak-signal regime N_S << kappa (3 N_B + 1) where the plateau exists.
double mmpc_small_kappa_limit(const NpsScenario& sc);

struct OptimizedDetector {
    double kappa;
    double chi;
};

// Exact-moment exponent maximized over the splitter setting.
OptimizedDetector mmpc_exponent_optimized(const NpsScenario& sc);
OptimizedDetector mmpdc_exponent_optimized(const NpsScenario& sc);

}  // namespace qilab
