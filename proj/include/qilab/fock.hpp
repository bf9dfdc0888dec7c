#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qilab/math.hpp"

namespace qilab {

// Truncated multimode density operator. Row/column indices run over the
// multi-index (n_1, ..., n_k) with mode 0 slowest, n_i < mode_dims[i].
struct FockOperator {
    std::vector<int> mode_dims;
    Eigen::MatrixXcd matrix;
    double trace_target = 1.0;

    FockOperator() = default;
    FockOperator(std::vector<int> dims, Eigen::MatrixXcd m, double target = 1.0);

    int dim() const { return static_cast<int>(matrix.rows()); }
    double trace() const { return matrix.trace().real(); }

    // Hermitian-validity check: Hermiticity to 1e-12, eigenvalues >= -1e-10.
    bool is_valid(double eig_tol = 1e-10) const;
};

// rho^s by eigendecomposition with eigenvalues clamped at zero. s = 0 maps to
// the support projector (eigenvalues > 1e-12).
FockOperator hermitian_power(const FockOperator& rho, double s);

double trace_norm(const Eigen::MatrixXcd& hermitian);

// 1/2 - (1/2)|pi1 rho1 - pi0 rho0|_1 clipped to [0, 1/2].
double helstrom_error(const FockOperator& rho0, const FockOperator& rho1, double pi0 = 0.5);

// Uhlmann square-root fidelity Tr sqrt(sqrt(rho0) rho1 sqrt(rho0)).
double fidelity_fock(const FockOperator& rho0, const FockOperator& rho1);

// C_s = Tr rho0^s rho1^(1-s), s in [0, 1].
double s_overlap_fock(const FockOperator& rho0, const FockOperator& rho1, double s);

// Smallest Hilbert dimension d such that the thermal(mean) mass on levels
// n >= d is below tail_tol.
int cutoff_for_tail(double mean_photons, double tail_tol);

// --- constructors and plumbing used by the channel and probe pipelines ---

Eigen::MatrixXcd annihilation_matrix(int dim);

FockOperator fock_number_state(int n, int dim);
FockOperator fock_thermal(double mean_photons, int dim);
FockOperator fock_coherent(std::complex<double> alpha, int dim);
FockOperator fock_displaced_thermal(std::complex<double> alpha, double mean_photons, int dim);

FockOperator tensor(const FockOperator& a, const FockOperator& b);

// Trace out one mode of a multimode operator.
FockOperator partial_trace(const FockOperator& rho, int traced_mode);

// First and second moments of the photon number in one mode.
double mean_photons_fock(const FockOperator& rho, int mode);

}  // namespace qilab
