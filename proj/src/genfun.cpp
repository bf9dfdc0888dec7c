#include "qilab/genfun.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace qilab {

Pgf Pgf::thermal(double n_b, int modes) {
    if (n_b < 0.0) throw NegativeEnergy();
    if (modes < 1) throw OutOfRange("Pgf::thermal: modes must be >= 1");
    double radius = n_b > 0.0 ? (n_b + 1.0) / n_b : std::numeric_limits<double>::infinity();
    auto f = [n_b, modes, radius](double xi) {
        if (std::abs(xi) >= radius) throw RadiusViolation();
        return std::pow(1.0 / (n_b + 1.0 - n_b * xi), modes);
    };
    return Pgf(f, modes, radius, 0.0);
}

Pgf Pgf::from_pmf(std::vector<double> pmf, int modes, double tail_bound) {
    if (modes < 1) throw OutOfRange("Pgf::from_pmf: modes must be >= 1");
    double norm = 0.0;
    for (double p : pmf) {
        if (p < -1e-12) throw OutOfRange("Pgf::from_pmf: negative mass");
        norm += p;
    }
    if (std::abs(norm + tail_bound - 1.0) > 1e-10)
        throw OutOfRange("Pgf::from_pmf: PMF not normalized");
    auto f = [pmf = std::move(pmf)](double xi) {
        double acc = 0.0;
        for (size_t n = pmf.size(); n-- > 0;) acc = acc * xi + pmf[n];
        return acc;
    };
    return Pgf(f, modes, std::numeric_limits<double>::infinity(), tail_bound);
}

Pgf pgf_thermal(double n_b, int modes) { return Pgf::thermal(n_b, modes); }

Pgf pgf_through_channel(const Pgf& p, const BosonicChannel& ch) {
    validate(ch);
    int m = p.modes();
    auto inner = p.eval_;
    double inner_radius = p.radius_;
    return std::visit(
        [&](auto&& c) -> Pgf {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, PureLoss>) {
                double eta = c.eta;
                auto f = [inner, inner_radius, eta](double xi) {
                    double arg = 1.0 + eta * (xi - 1.0);
                    if (std::abs(arg) >= inner_radius) throw RadiusViolation();
                    return inner(arg);
                };
                double radius = eta > 0.0
                                    ? 1.0 + (inner_radius - 1.0) / eta
                                    : std::numeric_limits<double>::infinity();
                return Pgf(f, m, radius, p.tail_);
            } else if constexpr (std::is_same_v<T, Qla>) {
                double g = c.gain;
                auto f = [inner, inner_radius, g, m](double xi) {
                    double denom = g - xi * (g - 1.0);
                    if (denom <= 0.0) throw RadiusViolation();
                    double arg = xi / denom;
                    if (std::abs(arg) >= inner_radius) throw RadiusViolation();
                    return std::pow(1.0 / denom, m) * inner(arg);
                };
                double radius = g > 1.0 ? g / (g - 1.0) : std::numeric_limits<double>::infinity();
                return Pgf(f, m, radius, p.tail_);
            } else {
                auto cas = decompose_thermal_loss(c.eta, c.n_b);
                double g = cas.gain, et = cas.eta_tilde;
                auto f = [inner, inner_radius, g, et, m](double xi) {
                    double denom = g - xi * (g - 1.0);
                    if (denom <= 0.0) throw RadiusViolation();
                    double arg = 1.0 - et + et * xi / denom;
                    if (std::abs(arg) >= inner_radius) throw RadiusViolation();
                    return std::pow(1.0 / denom, m) * inner(arg);
                };
                double radius = g > 1.0 ? g / (g - 1.0) : std::numeric_limits<double>::infinity();
                return Pgf(f, m, radius, p.tail_);
            }
        },
        ch);
}

MgfViews mgf_views(const Pgf& p) {
    MgfViews v;
    v.falling = [p](double xi) { return p(1.0 + xi); };
    int m = p.modes();
    v.rising = [p, m](double xi) {
        if (xi >= 1.0) throw RadiusViolation();
        return std::pow(1.0 / (1.0 - xi), m) * p(1.0 / (1.0 - xi));
    };
    return v;
}

double mean_from_pgf(const Pgf& p) {
    // P'(1) by central differences with one Richardson step.
    auto deriv = [&](double h) { return (p(1.0 + h) - p(1.0 - h)) / (2.0 * h); };
    double h = 1e-4;
    double d1 = deriv(h), d2 = deriv(0.5 * h);
    return (4.0 * d2 - d1) / 3.0;
}

std::vector<double> pmf_from_pgf(const Pgf& p, int d) {
    // Interpolation on Chebyshev nodes of [-1, 1]; exact-degree fit.
    int n = d + 1;
    Eigen::MatrixXd vand(n, n);
    Eigen::VectorXd rhs(n);
    for (int j = 0; j < n; ++j) {
        double x = std::cos(M_PI * (2.0 * j + 1.0) / (2.0 * n));
        double pw = 1.0;
        for (int k = 0; k < n; ++k) {
            vand(j, k) = pw;
            pw *= x;
        }
        rhs(j) = p(x);
    }
    Eigen::VectorXd coef = vand.colPivHouseholderQr().solve(rhs);
    return std::vector<double>(coef.data(), coef.data() + n);
}

}  // namespace qilab
