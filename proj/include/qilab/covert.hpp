#pragma once

#include <array>
#include <optional>
#include <vector>

#include "qilab/distinguish.hpp"
#include "qilab/gaussian.hpp"

namespace qilab {

enum class ProbeKind { Tmsv, Gcs, GenericPmf };

struct CovertScenario {
    double eta = 0.01;  // target reflectivity
    double n_b = 0.2;   // background brightness
    int m = 1;          // signal modes
    double eps = 0.0;   // covertness parameter in [0, 1/2]
    ProbeKind probe = ProbeKind::Tmsv;
    double probe_energy = 0.0;       // per-mode N_S (tmsv) or N_T (gcs)
    std::vector<double> probe_pmf;   // total-photon PMF for GenericPmf
};

struct WillieStates {
    GaussianState sigma0_mode;  // per signal mode, thermal(N_B)
    GaussianState sigma1_mode;  // per signal mode, thermal((1-eta) N_S + eta N_B)
    int modes = 1;
};

struct EnergyBand {
    double ns_min = 0.0;
    double ns_max = 0.0;
    std::array<double, 2> lambda1{};  // [lower branch, upper branch]
    std::array<double, 2> lambda2{};
    int d = 0;
};

WillieStates willie_states(const CovertScenario& sc);

// Returned-state pair for an iid TMSV probe of per-mode energy n_s against a
// passive-signature target of reflectivity eta in background n_b.
std::pair<GaussianState, GaussianState> tmsv_return_pair(double eta, double n_b, double n_s);

// Per-copy Chernoff data of the perfectly covert TMSV probe (N_S = N_B).
OverlapResult perfect_tmsv_exponent(double eta, double n_b);

// Per-copy GCS Chernoff exponent by Gauss-Laguerre quadrature over |alpha|^2;
// 64-node value must agree with the 96-node one to 1e-8 relative.
double perfect_gcs_exponent(double eta, double n_b);

// GCS exponent with the coherent-amplitude variance decoupled from N_B.
double gcs_exponent(double eta, double n_b, double n_t);

// Same integral with s pinned at 1/2.
double gcs_bhattacharyya_exponent(double eta, double n_b, double n_t);

struct AnalyticExponents {
    double chi_tmsv;
    double chi_gcs;
    double ratio;
};

// Weak-target closed forms and their Puiseux ratio.
AnalyticExponents analytic_exponents(double eta, double n_b);

// Extremal per-mode probe energies compatible with the eps-covert constraint,
// from the two-multiplier KKT system. d <= 0 requests the automatic
// truncation (double the 1 - 1e-12 quantile of Willie's total-photon law).
EnergyBand kkt_energy_band(double n_b, int m, double eps, double eta, int d = 0);

// Fidelity floor over probes with the given total-photon PMF.
double alice_fidelity_lower_bound(const std::vector<double>& pmf, double eta, double n_b, int m);
// Jensen variant depending only on the total signal energy.
double alice_fidelity_lower_bound(double total_energy, double eta, double n_b, int m);

// Probe-independent error floor under eps-covertness (PGF route).
double ecovert_error_floor(double eta, double n_b, int m, double eps);

// -ln(2 * floor)/M evaluated in the log domain (the floor itself underflows
// once M ln(per-mode factor) is large).
double ecovert_floor_exponent(double eta, double n_b, int m, double eps);

// |sigma0 - sigma1|_1 for M-mode thermal states of brightness N_B and
// (1-eta) n_s + eta N_B, via log-gamma term evaluation.
double willie_trace_norm(double n_s, double eta, double n_b, int m);

// Largest n_s with willie_trace_norm <= 4 eps, by bisection above N_B.
double max_covert_brightness(double eta, double n_b, int m, double eps);

// Per-copy Chernoff exponent of the scenario's probe at its stored energy.
double ecovert_probe_exponent(const CovertScenario& sc);

// Ratio of the analytic fidelity floor to the numerically minimized fidelity
// under the eps-covert constraint (Appendix-E style KKT solve); <= 1.
double kkt_fidelity_tightness(double eta, double n_b, int m, double eps, int d = 0);

// exp(-beta N_S)/4 with beta = -ln(1 - eta/(N_B+1)); no-passive-signature floor.
double nps_error_lower_bound(double n_s_total, double eta, double n_b);

}  // namespace qilab
