#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qilab/math.hpp"

namespace qilab {

// Quadrature convention: x = (a + a^dag)/sqrt(2), p = (a - a^dag)/(i sqrt(2)),
// vacuum variance 1/2. Canonical storage is XXPP, i.e. q = (x_1..x_M, p_1..p_M);
// XPXP groups quadratures by mode and is used by the two-mode standard form.
enum class Ordering { XXPP, XPXP };

struct GaussianState {
    int modes = 1;
    Eigen::VectorXd mean;  // length 2M
    Eigen::MatrixXd cov;   // 2M x 2M, symmetric
    Ordering ordering = Ordering::XXPP;

    GaussianState() = default;
    GaussianState(int m, Eigen::VectorXd mu, Eigen::MatrixXd v, Ordering ord = Ordering::XXPP);

    // Same state with the other quadrature layout. Involutive.
    GaussianState reordered(Ordering target) const;
};

// Standard-form two-mode covariance [[a I, C],[C, b I]] with C = diag(c, -c),
// c >= 0, in XPXP layout.
struct TwoModeStandardForm {
    double a = 0.5, b = 0.5, c = 0.0;
};

struct TwoModeDecomposition {
    double nu_plus;             // larger symplectic eigenvalue
    double nu_minus;            // smaller symplectic eigenvalue
    Eigen::Matrix4d symplectic; // S with S (nu_- I + nu_+ I) S^T = V (XPXP)
};

// Symplectic form Omega with [q, q^T] = i Omega for the given layout.
Eigen::MatrixXd symplectic_form(int modes, Ordering ordering = Ordering::XXPP);

// Permutation P with q_xpxp = P q_xxpp.
Eigen::MatrixXd ordering_permutation(int modes);

// Williamson spectrum of |i Omega V| collapsed to M values, descending.
// Throws NonPositiveDefinite when V + i Omega/2 fails PSD beyond 1e-9.
std::vector<double> symplectic_eigenvalues(const GaussianState& state);

// nu_pm = [sqrt((a+b)^2 - 4c^2) +- (b - a)]/2 and the symplectic matrix built
// from omega_pm. The Williamson diagonal carries nu_- on the first mode.
TwoModeDecomposition two_mode_standard_decomposition(const TwoModeStandardForm& f);

Eigen::Matrix4d assemble_standard_form(const TwoModeStandardForm& f);

GaussianState make_vacuum(int modes = 1);
GaussianState make_thermal(double mean_photons, int modes = 1);
GaussianState make_coherent(std::complex<double> alpha);
GaussianState make_tmsv(double n_s);

// Displaced thermal state: thermal(mean_photons) displaced by alpha.
GaussianState make_displaced_thermal(std::complex<double> alpha, double mean_photons);

// Mean photon number per mode, sum (V_xx + V_pp - 1)/2 + |mean|^2/2 over modes.
double mean_photons(const GaussianState& state, int mode);

// Validity check used by the constructors and tests: symmetry of V and the
// uncertainty relation V + i Omega/2 >= 0 within tolerance.
bool check_bona_fide(const GaussianState& state, double tol = 1e-9);

}  // namespace qilab
