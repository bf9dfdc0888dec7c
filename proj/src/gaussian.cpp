#include "qilab/gaussian.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>

namespace qilab {

namespace {

Eigen::MatrixXcd plus_i_omega_half(const GaussianState& s) {
    Eigen::MatrixXd omega = symplectic_form(s.modes, s.ordering);
    return s.cov.cast<std::complex<double>>() +
           std::complex<double>(0.0, 0.5) * omega.cast<std::complex<double>>();
}

}  // namespace

GaussianState::GaussianState(int m, Eigen::VectorXd mu, Eigen::MatrixXd v, Ordering ord)
    : modes(m), mean(std::move(mu)), cov(std::move(v)), ordering(ord) {
    if (modes < 1) throw OutOfRange("GaussianState: modes must be >= 1");
    if (mean.size() != 2 * modes || cov.rows() != 2 * modes || cov.cols() != 2 * modes)
        throw OutOfRange("GaussianState: dimension mismatch");
    double scale = std::max(1.0, cov.norm());
    if ((cov - cov.transpose()).norm() > 1e-12 * scale)
        throw OutOfRange("GaussianState: covariance not symmetric");
    cov = 0.5 * (cov + cov.transpose().eval());
}

GaussianState GaussianState::reordered(Ordering target) const {
    if (target == ordering) return *this;
    Eigen::MatrixXd p = ordering_permutation(modes);
    // q_xpxp = P q_xxpp, so V_xpxp = P V_xxpp P^T.
    if (ordering == Ordering::XXPP)
        return GaussianState(modes, p * mean, p * cov * p.transpose(), target);
    return GaussianState(modes, p.transpose() * mean, p.transpose() * cov * p, target);
}

Eigen::MatrixXd symplectic_form(int modes, Ordering ordering) {
    if (modes < 1) throw OutOfRange("symplectic_form: modes must be >= 1");
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
    if (ordering == Ordering::XXPP) {
        for (int k = 0; k < modes; ++k) {
            omega(k, modes + k) = 1.0;
            omega(modes + k, k) = -1.0;
        }
    } else {
        for (int k = 0; k < modes; ++k) {
            omega(2 * k, 2 * k + 1) = 1.0;
            omega(2 * k + 1, 2 * k) = -1.0;
        }
    }
    return omega;
}

Eigen::MatrixXd ordering_permutation(int modes) {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
    for (int k = 0; k < modes; ++k) {
        p(2 * k, k) = 1.0;              // x_k
        p(2 * k + 1, modes + k) = 1.0;  // p_k
    }
    return p;
}

bool check_bona_fide(const GaussianState& s, double tol) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(plus_i_omega_half(s),
                                                       Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
}

std::vector<double> symplectic_eigenvalues(const GaussianState& state) {
    if (!check_bona_fide(state)) throw NonPositiveDefinite();
    Eigen::MatrixXd omega = symplectic_form(state.modes, state.ordering);
    Eigen::MatrixXcd m = std::complex<double>(0.0, 1.0) *
                         (omega * state.cov).cast<std::complex<double>>();
    // i Omega V is similar to a Hermitian matrix for bona fide V; its spectrum
    // is real and comes in +-nu pairs.
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
    std::vector<double> nus;
    nus.reserve(state.modes);
    std::vector<double> all;
    for (int i = 0; i < es.eigenvalues().size(); ++i) all.push_back(es.eigenvalues()(i).real());
    std::sort(all.begin(), all.end(), std::greater<double>());
    for (int i = 0; i < state.modes; ++i) nus.push_back(all[i]);
    return nus;
}

Eigen::Matrix4d assemble_standard_form(const TwoModeStandardForm& f) {
    Eigen::Matrix4d v = Eigen::Matrix4d::Zero();
    v(0, 0) = v(1, 1) = f.a;
    v(2, 2) = v(3, 3) = f.b;
    v(0, 2) = v(2, 0) = f.c;
    v(1, 3) = v(3, 1) = -f.c;
    return v;
}

TwoModeDecomposition two_mode_standard_decomposition(const TwoModeStandardForm& f) {
    double y = (f.a + f.b) * (f.a + f.b) - 4.0 * f.c * f.c;
    if (y <= 0.0) throw DegenerateForm();
    double sy = std::sqrt(y);
    TwoModeDecomposition d;
    d.nu_plus = 0.5 * (sy + (f.b - f.a));
    d.nu_minus = 0.5 * (sy - (f.b - f.a));
    double wp = std::sqrt((f.a + f.b + sy) / (2.0 * sy));
    double wm_sq = (f.a + f.b - sy) / (2.0 * sy);
    double wm = std::sqrt(std::max(0.0, wm_sq));
    if (f.c < 0.0) wm = -wm;  // keep c = omega+ omega- (nu+ + nu-) signed
    Eigen::Matrix4d s = Eigen::Matrix4d::Zero();
    s(0, 0) = s(1, 1) = wp;
    s(2, 2) = s(3, 3) = wp;
    s(0, 2) = s(2, 0) = wm;
    s(1, 3) = s(3, 1) = -wm;
    d.symplectic = s;
    return d;
}

GaussianState make_vacuum(int modes) {
    return GaussianState(modes, Eigen::VectorXd::Zero(2 * modes),
                         0.5 * Eigen::MatrixXd::Identity(2 * modes, 2 * modes));
}

GaussianState make_thermal(double n, int modes) {
    if (n < 0.0) throw NegativeEnergy();
    return GaussianState(modes, Eigen::VectorXd::Zero(2 * modes),
                         (n + 0.5) * Eigen::MatrixXd::Identity(2 * modes, 2 * modes));
}

GaussianState make_coherent(std::complex<double> alpha) {
    Eigen::VectorXd mu(2);
    mu << std::sqrt(2.0) * alpha.real(), std::sqrt(2.0) * alpha.imag();
    return GaussianState(1, mu, 0.5 * Eigen::Matrix2d::Identity());
}

GaussianState make_displaced_thermal(std::complex<double> alpha, double n) {
    if (n < 0.0) throw NegativeEnergy();
    Eigen::VectorXd mu(2);
    mu << std::sqrt(2.0) * alpha.real(), std::sqrt(2.0) * alpha.imag();
    return GaussianState(1, mu, (n + 0.5) * Eigen::Matrix2d::Identity());
}

GaussianState make_tmsv(double n_s) {
    if (n_s < 0.0) throw NegativeEnergy();
    double s = n_s + 0.5;
    double c = std::sqrt(n_s * (n_s + 1.0));
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(4, 4);
    // XXPP: (x_S, x_I, p_S, p_I); x-block correlation +c, p-block -c.
    v(0, 0) = v(1, 1) = v(2, 2) = v(3, 3) = s;
    v(0, 1) = v(1, 0) = c;
    v(2, 3) = v(3, 2) = -c;
    return GaussianState(2, Eigen::VectorXd::Zero(4), v);
}

double mean_photons(const GaussianState& state, int mode) {
    if (mode < 0 || mode >= state.modes) throw BadModeIndex();
    GaussianState s = state.reordered(Ordering::XXPP);
    double vx = s.cov(mode, mode);
    double vp = s.cov(state.modes + mode, state.modes + mode);
    double mx = s.mean(mode), mp = s.mean(state.modes + mode);
    return 0.5 * (vx + vp - 1.0) + 0.5 * (mx * mx + mp * mp);
}

}  // namespace qilab
