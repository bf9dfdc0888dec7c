#include "qilab/math.hpp"

#include <Eigen/Dense>

namespace qilab {

double log_gamma(double x) {
    // Lanczos approximation, g = 7, 9 coefficients.
    static const double g = 7.0;
    static const double c[9] = {
        0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
    if (!(x > 0.0)) throw OutOfRange("log_gamma: x must be positive");
    if (x < 0.5) {
        // Reflection keeps the series argument away from the poles.
        return std::log(M_PI / std::sin(M_PI * x)) - log_gamma(1.0 - x);
    }
    x -= 1.0;
    double a = c[0];
    double t = x + g + 0.5;
    for (int i = 1; i < 9; ++i) a += c[i] / (x + i);
    return 0.5 * std::log(2.0 * M_PI) + (x + 0.5) * std::log(t) - t + std::log(a);
}

double log_binomial(double top, double bottom) {
    return log_gamma(top + 1.0) - log_gamma(bottom + 1.0) - log_gamma(top - bottom + 1.0);
}

GoldenResult golden_min(const std::function<double(double)>& f, double a, double b,
                        double xtol, int max_iter) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - (b - a) * invphi;
    double d = a + (b - a) * invphi;
    double fc = f(c), fd = f(d);
    for (int i = 0; i < max_iter && (b - a) > xtol; ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * invphi;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * invphi;
            fd = f(d);
        }
    }
    double xm = 0.5 * (a + b);
    return {xm, f(xm)};
}

void gauss_laguerre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    // Jacobi matrix of the Laguerre recurrence: diag 2k+1, offdiag k.
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        J(k, k) = 2.0 * k + 1.0;
        if (k + 1 < n) J(k, k + 1) = J(k + 1, k) = k + 1.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    nodes.resize(n);
    weights.resize(n);
    for (int k = 0; k < n; ++k) {
        nodes[k] = es.eigenvalues()(k);
        double v0 = es.eigenvectors()(0, k);
        weights[k] = v0 * v0;  // first-moment mu0 = 1 for e^-x
    }
}

}  // namespace qilab
