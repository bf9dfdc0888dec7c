#include "qilab/distinguish.hpp"

#include <Eigen/Eigenvalues>

namespace qilab {

namespace {

// Williamson data of one state, organized as per-mode symplectic eigenvalues
// plus the symplectic matrix realizing V = S diag(nu_k I_2) S^T in XPXP layout.
struct WilliamsonBlocks {
    std::vector<double> nu;  // one entry per mode
    Eigen::MatrixXd s;       // 2M x 2M
};

bool isotropic_single(const Eigen::MatrixXd& v, int k, double tol, double& nu) {
    double vx = v(2 * k, 2 * k), vp = v(2 * k + 1, 2 * k + 1);
    if (std::abs(vx - vp) > tol || std::abs(v(2 * k, 2 * k + 1)) > tol) return false;
    nu = 0.5 * (vx + vp);
    return true;
}

WilliamsonBlocks williamson_blocks(const GaussianState& state) {
    GaussianState s = state.reordered(Ordering::XPXP);
    int m = s.modes;
    const Eigen::MatrixXd& v = s.cov;
    double scale = std::max(1.0, v.norm());
    double tol = 1e-10 * scale;

    // Coupling graph over modes.
    std::vector<int> comp(m, -1);
    std::vector<std::vector<int>> groups;
    for (int i = 0; i < m; ++i) {
        if (comp[i] >= 0) continue;
        std::vector<int> stack{i};
        comp[i] = static_cast<int>(groups.size());
        std::vector<int> grp;
        while (!stack.empty()) {
            int a = stack.back();
            stack.pop_back();
            grp.push_back(a);
            for (int b = 0; b < m; ++b) {
                if (comp[b] >= 0 || b == a) continue;
                if (v.block(2 * a, 2 * b, 2, 2).norm() > tol) {
                    comp[b] = comp[i];
                    stack.push_back(b);
                }
            }
        }
        std::sort(grp.begin(), grp.end());
        groups.push_back(grp);
    }

    WilliamsonBlocks out;
    out.nu.assign(m, 0.0);
    out.s = Eigen::MatrixXd::Identity(2 * m, 2 * m);
    for (const auto& grp : groups) {
        if (grp.size() == 1) {
            double nu;
            if (!isotropic_single(v, grp[0], tol, nu))
                throw StandardFormUnavailable("single-mode block is not isotropic");
            out.nu[grp[0]] = std::max(nu, 0.5);
        } else if (grp.size() == 2) {
            int i = grp[0], j = grp[1];
            double a = v(2 * i, 2 * i), b = v(2 * j, 2 * j);
            if (std::abs(v(2 * i, 2 * i + 1)) > tol || std::abs(a - v(2 * i + 1, 2 * i + 1)) > tol ||
                std::abs(v(2 * j, 2 * j + 1)) > tol || std::abs(b - v(2 * j + 1, 2 * j + 1)) > tol)
                throw StandardFormUnavailable("pair block diagonals not scalar");
            double c1 = v(2 * i, 2 * j), c2 = v(2 * i + 1, 2 * j + 1);
            if (std::abs(c1 + c2) > tol || std::abs(v(2 * i, 2 * j + 1)) > tol ||
                std::abs(v(2 * i + 1, 2 * j)) > tol)
                throw StandardFormUnavailable("pair block is not in standard form");
            TwoModeDecomposition d = two_mode_standard_decomposition({a, b, c1});
            out.nu[i] = std::max(d.nu_minus, 0.5);
            out.nu[j] = std::max(d.nu_plus, 0.5);
            int rows[4] = {2 * i, 2 * i + 1, 2 * j, 2 * j + 1};
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c) out.s(rows[r], rows[c]) = d.symplectic(r, c);
        } else {
            throw StandardFormUnavailable("coupled block spans more than two modes");
        }
    }
    return out;
}

double big_g(double x, double s) {
    return 1.0 / (std::pow(x + 0.5, s) - std::pow(x - 0.5, s));
}

double big_lambda(double x, double s) {
    double p = std::pow(x + 0.5, s), q = std::pow(x - 0.5, s);
    return (p + q) / (p - q);
}

}  // namespace

double fidelity_gaussian(const GaussianState& s0, const GaussianState& s1) {
    if (s0.modes != s1.modes) throw OutOfRange("fidelity_gaussian: mode mismatch");
    GaussianState a = s0.reordered(Ordering::XXPP);
    GaussianState b = s1.reordered(Ordering::XXPP);
    int n2 = 2 * a.modes;
    Eigen::MatrixXd omega = symplectic_form(a.modes, Ordering::XXPP);
    Eigen::MatrixXd vsum = a.cov + b.cov;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(vsum);
    if (!lu.isInvertible()) throw SingularSum();
    Eigen::MatrixXd vsum_inv = lu.inverse();
    Eigen::MatrixXd vaux =
        omega.transpose() * vsum_inv * (0.25 * omega + b.cov * omega * a.cov);

    // F_tot^4 = det(V_aux) prod_i 2 (sqrt(1 + 1/(4 mu_i^2)) + 1) over the
    // eigenvalues mu_i of V_aux Omega; eigenvalues stay well defined where a
    // matrix square root would hit a defective 0/0 (pure states).
    Eigen::MatrixXd ma = vaux * omega;
    Eigen::EigenSolver<Eigen::MatrixXd> es(ma, false);
    std::complex<double> prod = vaux.determinant();
    for (int i = 0; i < n2; ++i) {
        std::complex<double> mu = es.eigenvalues()(i);
        if (std::abs(mu) == 0.0) throw SingularSum("fidelity_gaussian: singular auxiliary matrix");
        std::complex<double> radicand = 1.0 + 0.25 / (mu * mu);
        prod *= 2.0 * (std::sqrt(radicand) + 1.0);
    }
    double f_tot = std::pow(std::max(0.0, prod.real()), 0.25);
    double f0 = f_tot / std::pow(vsum.determinant(), 0.25);

    Eigen::VectorXd delta = b.mean - a.mean;
    double quad = delta.dot(vsum_inv * delta);
    double f = f0 * std::exp(-0.25 * quad);
    return std::min(f, 1.0 + 1e-9);
}

double s_overlap_gaussian(const GaussianState& s0, const GaussianState& s1, double s) {
    if (s0.modes != s1.modes) throw OutOfRange("s_overlap_gaussian: mode mismatch");
    if (!(s > 0.0 && s < 1.0))
        throw OutOfRange("s_overlap_gaussian: s must lie strictly inside (0, 1)");
    int m = s0.modes;
    WilliamsonBlocks w0 = williamson_blocks(s0);
    WilliamsonBlocks w1 = williamson_blocks(s1);

    double log_pi = 0.0;
    Eigen::VectorXd d0(2 * m), d1(2 * m);
    for (int k = 0; k < m; ++k) {
        log_pi += std::log(big_g(w0.nu[k], s)) + std::log(big_g(w1.nu[k], 1.0 - s));
        d0(2 * k) = d0(2 * k + 1) = big_lambda(w0.nu[k], s);
        d1(2 * k) = d1(2 * k + 1) = big_lambda(w1.nu[k], 1.0 - s);
    }
    Eigen::MatrixXd sigma = w0.s * d0.asDiagonal() * w0.s.transpose() +
                            w1.s * d1.asDiagonal() * w1.s.transpose();
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success)
        throw StandardFormUnavailable("s_overlap_gaussian: Sigma_s not positive definite");
    double log_det = 0.0;
    for (int i = 0; i < 2 * m; ++i) log_det += 2.0 * std::log(llt.matrixL()(i, i));

    GaussianState a = s0.reordered(Ordering::XPXP);
    GaussianState b = s1.reordered(Ordering::XPXP);
    Eigen::VectorXd delta = b.mean - a.mean;
    // Quadrature convention with vacuum variance 1/2: the displaced factor is
    // exp(-delta^T Sigma_s^{-1} delta); checked against the Fock oracle.
    double quad = delta.dot(llt.solve(delta));
    double log_c = m * std::log(2.0) + log_pi - 0.5 * log_det - quad;
    return std::exp(log_c);
}

OverlapResult chernoff(const GaussianState& s0, const GaussianState& s1) {
    const double pad = 1e-9;
    auto f = [&](double s) { return s_overlap_gaussian(s0, s1, s); };
    GoldenResult g = golden_min(f, pad, 1.0 - pad, 1e-6, 60);
    OverlapResult r;
    r.s_star = g.x;
    r.value = std::min(g.value, f(0.5) + 1e-12);
    r.exponent = -std::log(r.value);
    return r;
}

OverlapResult bhattacharyya(const GaussianState& s0, const GaussianState& s1) {
    OverlapResult r;
    r.s_star = 0.5;
    r.value = s_overlap_gaussian(s0, s1, 0.5);
    r.exponent = -std::log(r.value);
    return r;
}

std::pair<double, double> fvg_bounds(double fidelity) {
    if (fidelity < -1e-12 || fidelity > 1.0 + 1e-9) throw OutOfRange("fvg_bounds: F outside [0, 1]");
    double f = std::clamp(fidelity, 0.0, 1.0);
    return {0.5 * (1.0 - std::sqrt(1.0 - f * f)), 0.5 * f};
}

double qfi_from_fidelity(const std::function<double(double)>& f, double theta, double h) {
    auto second = [&](double step) {
        double fm2 = f(theta - 2.0 * step), fm1 = f(theta - step);
        double f0 = f(theta);
        double fp1 = f(theta + step), fp2 = f(theta + 2.0 * step);
        return (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * step * step);
    };
    double coarse = second(h);
    double fine = second(0.5 * h);
    double scale = std::max(std::abs(fine), 1e-300);
    if (std::abs(coarse - fine) > 1e-4 * scale) throw NoisyDerivative();
    return -4.0 * fine;
}

}  // namespace qilab
