#pragma once

#include <vector>

#include "qilab/math.hpp"

namespace qilab {

// tau = arccosh sqrt(G); all fidelities are parameterized internally by tau
// and converted with K_G = K_tau / (4 G (G-1)) at the end.
double tau_of_gain(double g);

// nu = sech(tau' - tau) = [sqrt(G G') - sqrt((G-1)(G'-1))]^-1.
double amplifier_nu(double g, double g_prime);

// sum_n p_n nu^(n+M) for a number-diagonal-signal probe.
double nds_output_fidelity(const std::vector<double>& pmf, int m, double g, double g_prime);

struct QfiNds {
    double k_tau;  // 4 (N + M)
    double k_g;    // (N + M) / (G (G - 1))
};

QfiNds qfi_nds(double n, double m, double g);

double qfi_coherent(double n, double m, double g);

struct HomHetFi {
    double j_hom;  // N / (G (2G - 1))
    double j_het;  // (N/2 + M) / G^2
};

HomHetFi fi_homodyne_heterodyne(double n, double m, double g);

// Photocount estimator (Y/eta_d + M)/(N + M).
double estimate_gain(double y_total, double n, double m, double eta_d);

double mse_number(double n, double m, double g, double eta_d);
double mse_coherent(double n, double m, double g, double eta_d);

double qfi_coherent_lossy(double n, double m, double g, double eta_d);

// Classical Fisher information of the lossy photocount family for a
// multimode number-state probe; equals the QFI (number-diagonal family).
double qfi_number_lossy(const std::vector<int>& photons_per_mode, double g, double eta_d,
                        int cutoff);

// Gain above which the single-photon-probe photocount MSE beats the ideal
// coherent-state QCRB; returns 1 when it wins everywhere.
double threshold_gain(double eta_d, double n, double m);

struct BuresResult {
    double distance;
    double fidelity_min;
};

// Energy-constrained Bures distance between M-mode amplifier channels.
BuresResult ecb_distance(double n, int m, double g, double g_prime);
// Classical (coherent-probe) counterpart.
BuresResult cecb_distance(double n, int m, double g, double g_prime);

// Classical FI of the Schmidt-basis measurement for an iid per-mode photon
// PMF; matches 4 (N + M) with N = m * E[x].
double schmidt_fisher_information(const std::vector<double>& per_mode_pmf, int m, double g,
                                  int cutoff);

}  // namespace qilab
