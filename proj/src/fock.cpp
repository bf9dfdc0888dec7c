#include "qilab/fock.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace qilab {

namespace {

Eigen::MatrixXcd clamped_power(const Eigen::MatrixXcd& h, double s, double support_tol) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    Eigen::VectorXd powered(es.eigenvalues().size());
    for (int i = 0; i < powered.size(); ++i) {
        double lam = std::max(0.0, es.eigenvalues()(i));
        if (s == 0.0)
            powered(i) = lam > support_tol ? 1.0 : 0.0;
        else
            powered(i) = std::pow(lam, s);
    }
    return es.eigenvectors() * powered.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

FockOperator::FockOperator(std::vector<int> dims, Eigen::MatrixXcd m, double target)
    : mode_dims(std::move(dims)), matrix(std::move(m)), trace_target(target) {
    long expect = 1;
    for (int d : mode_dims) expect *= d;
    if (matrix.rows() != expect || matrix.cols() != expect)
        throw OutOfRange("FockOperator: matrix does not match mode_dims");
    matrix = 0.5 * (matrix + matrix.adjoint().eval());
}

bool FockOperator::is_valid(double eig_tol) const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -eig_tol;
}

FockOperator hermitian_power(const FockOperator& rho, double s) {
    if (s < 0.0) throw OutOfRange("hermitian_power: s must be >= 0");
    return FockOperator(rho.mode_dims, clamped_power(rho.matrix, s, 1e-12), rho.trace_target);
}

double trace_norm(const Eigen::MatrixXcd& hermitian) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

double helstrom_error(const FockOperator& rho0, const FockOperator& rho1, double pi0) {
    if (pi0 < 0.0 || pi0 > 1.0) throw OutOfRange("helstrom_error: prior out of range");
    double pi1 = 1.0 - pi0;
    double pe = 0.5 - 0.5 * trace_norm(pi1 * rho1.matrix - pi0 * rho0.matrix);
    return std::clamp(pe, 0.0, 0.5);
}

double fidelity_fock(const FockOperator& rho0, const FockOperator& rho1) {
    Eigen::MatrixXcd sqrt0 = clamped_power(rho0.matrix, 0.5, 1e-12);
    Eigen::MatrixXcd inner = sqrt0 * rho1.matrix * sqrt0;
    Eigen::MatrixXcd root = clamped_power(inner, 0.5, 1e-12);
    return root.trace().real();
}

double s_overlap_fock(const FockOperator& rho0, const FockOperator& rho1, double s) {
    if (s < 0.0 || s > 1.0) throw OutOfRange("s_overlap_fock: s outside [0, 1]");
    Eigen::MatrixXcd a = clamped_power(rho0.matrix, s, 1e-12);
    Eigen::MatrixXcd b = clamped_power(rho1.matrix, 1.0 - s, 1e-12);
    return (a * b).trace().real();
}

int cutoff_for_tail(double mean_photons, double tail_tol) {
    if (!(tail_tol > 0.0 && tail_tol < 1.0)) throw OutOfRange("cutoff_for_tail: bad tolerance");
    if (mean_photons < 0.0) throw NegativeEnergy();
    if (mean_photons == 0.0) return 1;
    double t = mean_photons / (mean_photons + 1.0);
    // Mass on levels >= d is t^d.
    int d = static_cast<int>(std::ceil(std::log(tail_tol) / std::log(t)));
    while (std::pow(t, d) > tail_tol) ++d;
    while (d > 1 && std::pow(t, d - 1) <= tail_tol) --d;
    return d;
}

Eigen::MatrixXcd annihilation_matrix(int dim) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

FockOperator fock_number_state(int n, int dim) {
    if (n < 0 || n >= dim) throw OutOfRange("fock_number_state: level outside cutoff");
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    m(n, n) = 1.0;
    return FockOperator({dim}, m);
}

FockOperator fock_thermal(double mean_photons, int dim) {
    if (mean_photons < 0.0) throw NegativeEnergy();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    if (mean_photons == 0.0) {
        m(0, 0) = 1.0;
    } else {
        double t = mean_photons / (mean_photons + 1.0);
        double p = 1.0 / (mean_photons + 1.0);
        for (int n = 0; n < dim; ++n) {
            m(n, n) = p;
            p *= t;
        }
    }
    return FockOperator({dim}, m);
}

FockOperator fock_coherent(std::complex<double> alpha, int dim) {
    Eigen::VectorXcd psi(dim);
    double log_norm = -0.5 * std::norm(alpha);
    std::complex<double> amp = std::exp(std::complex<double>(log_norm, 0.0));
    for (int n = 0; n < dim; ++n) {
        psi(n) = amp;
        amp *= alpha / std::sqrt(static_cast<double>(n + 1));
    }
    return FockOperator({dim}, psi * psi.adjoint());
}

FockOperator fock_displaced_thermal(std::complex<double> alpha, double mean_photons, int dim) {
    FockOperator th = fock_thermal(mean_photons, dim);
    Eigen::MatrixXcd a = annihilation_matrix(dim);
    Eigen::MatrixXcd gen = alpha * a.adjoint() - std::conj(alpha) * a;
    Eigen::MatrixXcd d = gen.exp();
    return FockOperator({dim}, d * th.matrix * d.adjoint());
}

FockOperator tensor(const FockOperator& a, const FockOperator& b) {
    std::vector<int> dims = a.mode_dims;
    dims.insert(dims.end(), b.mode_dims.begin(), b.mode_dims.end());
    long da = a.dim(), db = b.dim();
    Eigen::MatrixXcd m(da * db, da * db);
    for (long i = 0; i < da; ++i)
        for (long j = 0; j < da; ++j)
            m.block(i * db, j * db, db, db) = a.matrix(i, j) * b.matrix;
    return FockOperator(dims, std::move(m), a.trace_target * b.trace_target);
}

FockOperator partial_trace(const FockOperator& rho, int traced_mode) {
    int k = static_cast<int>(rho.mode_dims.size());
    if (traced_mode < 0 || traced_mode >= k) throw BadModeIndex();
    long left = 1, right = 1;
    for (int i = 0; i < traced_mode; ++i) left *= rho.mode_dims[i];
    for (int i = traced_mode + 1; i < k; ++i) right *= rho.mode_dims[i];
    long dt = rho.mode_dims[traced_mode];
    long dout = left * right;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dout, dout);
    for (long li = 0; li < left; ++li)
        for (long lj = 0; lj < left; ++lj)
            for (long ri = 0; ri < right; ++ri)
                for (long rj = 0; rj < right; ++rj) {
                    std::complex<double> sum = 0.0;
                    for (long t = 0; t < dt; ++t)
                        sum += rho.matrix((li * dt + t) * right + ri, (lj * dt + t) * right + rj);
                    out(li * right + ri, lj * right + rj) = sum;
                }
    std::vector<int> dims;
    for (int i = 0; i < k; ++i)
        if (i != traced_mode) dims.push_back(rho.mode_dims[i]);
    if (dims.empty()) dims.push_back(1);
    return FockOperator(dims, std::move(out), rho.trace_target);
}

double mean_photons_fock(const FockOperator& rho, int mode) {
    int k = static_cast<int>(rho.mode_dims.size());
    if (mode < 0 || mode >= k) throw BadModeIndex();
    long right = 1;
    for (int i = mode + 1; i < k; ++i) right *= rho.mode_dims[i];
    long dm = rho.mode_dims[mode];
    double sum = 0.0;
    for (long idx = 0; idx < rho.dim(); ++idx) {
        long n = (idx / right) % dm;
        sum += static_cast<double>(n) * rho.matrix(idx, idx).real();
    }
    return sum;
}

}  // namespace qilab
