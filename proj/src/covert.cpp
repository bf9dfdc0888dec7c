#include "qilab/covert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qilab/channels.hpp"

namespace qilab {

namespace {

// log of w_n = C(n+M-1, n) N^n / (N+1)^(n+M), the M-mode thermal total-photon PMF.
struct ThermalTotalLaw {
    double n_bar;
    int m;

    double log_w(long n) const {
        double lb = n == 0 ? 0.0 : log_binomial(static_cast<double>(n) + m - 1.0,
                                                static_cast<double>(n));
        double le = n == 0 ? 0.0 : n * std::log(n_bar);
        return lb + le - (n + m) * std::log(n_bar + 1.0);
    }

    double mean() const { return static_cast<double>(m) * n_bar; }
    double stddev() const { return std::sqrt(static_cast<double>(m) * n_bar * (n_bar + 1.0)); }

    // Index whose upper tail mass is below `tail`; Gaussian z-score with a
    // skew cushion (summing the weights cannot resolve 1e-12 deficits once
    // the log-gamma round-off accumulates).
    long quantile(double tail) const {
        double z = std::sqrt(2.0 * std::log(1.0 / tail)) + 1.5;
        return static_cast<long>(std::ceil(mean() + z * stddev() + 0.02 * mean())) + 32;
    }

    // Upper bound on the mass beyond index d from the weight ratio
    // w_{n+1}/w_n = t (n + m)/(n + 1), decreasing past the mode.
    double log_tail_bound(long d) const {
        double t = n_bar / (n_bar + 1.0);
        double r = t * (d + static_cast<double>(m)) / (d + 1.0);
        if (r >= 1.0) return 0.0;  // bound vacuous
        return log_w(d) + std::log(r / (1.0 - r));
    }
};

double nu_factor(double g0, double g1) {
    return 1.0 / (std::sqrt(g0 * g1) - std::sqrt((g0 - 1.0) * (g1 - 1.0)));
}

// x of the PGF error-floor route: the solution of
// 1 + (x-1)(1-eta)/(eta N_B (1-x) + 1) = xi with xi^2 = 1 - eta/((1-eta)N_B+1).
double floor_x(double eta, double n_b) {
    double xi = std::sqrt(1.0 - eta / ((1.0 - eta) * n_b + 1.0));
    double u = (1.0 - xi) / ((1.0 - eta) - eta * n_b * (1.0 - xi));
    return 1.0 - u;
}

struct KktSums {
    double s1, s2, ds1, ds2;  // sums and their lambda2-derivatives
};

}  // namespace

WillieStates willie_states(const CovertScenario& sc) {
    if (sc.probe == ProbeKind::GenericPmf)
        throw OutOfRange("willie_states: thermal-reduction probes (tmsv/gcs) only");
    double n_s = sc.probe_energy;
    double n = (1.0 - sc.eta) * n_s + sc.eta * sc.n_b;
    return {make_thermal(sc.n_b), make_thermal(n), sc.m};
}

std::pair<GaussianState, GaussianState> tmsv_return_pair(double eta, double n_b, double n_s) {
    if (eta < 0.0 || eta > 1.0) throw OutOfRange("tmsv_return_pair: eta outside [0, 1]");
    if (n_b < 0.0 || n_s < 0.0) throw NegativeEnergy();
    double s = n_s + 0.5;
    double b = n_b + 0.5;
    double a = eta * n_s + (1.0 - eta) * n_b + 0.5;
    double c = std::sqrt(eta * n_s * (n_s + 1.0));
    // XXPP over (R, I): x-block then p-block.
    Eigen::MatrixXd v0 = Eigen::MatrixXd::Zero(4, 4), v1 = Eigen::MatrixXd::Zero(4, 4);
    v0(0, 0) = v0(2, 2) = b;
    v0(1, 1) = v0(3, 3) = s;
    v1(0, 0) = v1(2, 2) = a;
    v1(1, 1) = v1(3, 3) = s;
    v1(0, 1) = v1(1, 0) = c;
    v1(2, 3) = v1(3, 2) = -c;
    return {GaussianState(2, Eigen::VectorXd::Zero(4), v0),
            GaussianState(2, Eigen::VectorXd::Zero(4), v1)};
}

OverlapResult perfect_tmsv_exponent(double eta, double n_b) {
    auto [s0, s1] = tmsv_return_pair(eta, n_b, n_b);
    return chernoff(s0, s1);
}

namespace {

double gcs_integral_exponent(double eta, double n_b, double n_t, bool optimize_s) {
    if (eta < 0.0 || eta > 1.0) throw OutOfRange("gcs_exponent: eta outside [0, 1]");
    if (n_b < 0.0 || n_t < 0.0) throw NegativeEnergy();
    if (eta == 0.0 || n_t == 0.0) return 0.0;
    GaussianState h0 = make_thermal(n_b);
    double var1 = (1.0 - eta) * n_b;

    auto integral = [&](int nodes) {
        std::vector<double> x, w;
        gauss_laguerre(nodes, x, w);
        double warm = 0.5;
        double acc = 0.0;
        const double pad = 1e-9;
        for (int i = 0; i < nodes; ++i) {
            double amp2 = n_t * x[i];  // |alpha|^2
            // The channel output mean is sqrt(2 eta) (Re a, Im a); radial, so
            // put the whole displacement on the x quadrature.
            GaussianState h1 = make_displaced_thermal(std::sqrt(eta * amp2), var1);
            if (!optimize_s) {
                acc += w[i] * s_overlap_gaussian(h0, h1, 0.5);
                continue;
            }
            auto f = [&](double s) { return s_overlap_gaussian(h0, h1, s); };
            double lo = std::max(pad, warm - 0.25), hi = std::min(1.0 - pad, warm + 0.25);
            GoldenResult g = golden_min(f, lo, hi, 1e-7, 60);
            if (g.x - lo < 2e-7 || hi - g.x < 2e-7) g = golden_min(f, pad, 1.0 - pad, 1e-7, 60);
            warm = g.x;
            acc += w[i] * g.value;
        }
        return acc;
    };

    double v64 = integral(64);
    double v96 = integral(96);
    if (std::abs(v96 - v64) > 1e-8 * std::abs(v96)) throw QuadratureNonConverged();
    return -std::log(v96);
}

}  // namespace

double gcs_exponent(double eta, double n_b, double n_t) {
    return gcs_integral_exponent(eta, n_b, n_t, true);
}

double gcs_bhattacharyya_exponent(double eta, double n_b, double n_t) {
    return gcs_integral_exponent(eta, n_b, n_t, false);
}

double perfect_gcs_exponent(double eta, double n_b) { return gcs_exponent(eta, n_b, n_b); }

AnalyticExponents analytic_exponents(double eta, double n_b) {
    double chi_tmsv =
        -std::log1p(-(eta / 4.0) * (1.0 - 1.0 / ((2.0 * n_b + 1.0) * (2.0 * n_b + 1.0))));
    double chi_gcs =
        -std::log1p(-2.0 * eta * n_b * (n_b - std::sqrt(n_b * (n_b + 1.0)) + 0.5));
    double ratio = (n_b + 1.0) * (2.0 * (n_b + std::sqrt(n_b * (n_b + 1.0))) + 1.0) /
                   ((2.0 * n_b + 1.0) * (2.0 * n_b + 1.0));
    return {chi_tmsv, chi_gcs, ratio};
}

namespace {

// One KKT branch: solve (lambda1, lambda2) of Appendix-D form by damped Newton.
// Weights log_w over 0..d; norm is 1/sum(w) (finite-sum renormalization).
struct KktBranchResult {
    double lambda1, lambda2, mean_energy;
};

KktBranchResult solve_kkt_branch(const std::vector<double>& log_w, double target,
                                 double lambda2_init, bool upper_branch) {
    const int n_terms = static_cast<int>(log_w.size());
    std::vector<double> w(n_terms);
    double wsum = 0.0;
    for (int n = 0; n < n_terms; ++n) {
        w[n] = std::exp(log_w[n]);
        wsum += w[n];
    }
    double norm = 1.0 / wsum;

    auto sums = [&](double l2) {
        KktSums s{0.0, 0.0, 0.0, 0.0};
        for (int n = 0; n < n_terms; ++n) {
            double dn = n - l2;
            double ad = std::abs(dn);
            if (ad < 1e-14) ad = 1e-14;
            s.s1 += w[n] / ad;
            s.s2 += w[n] / (dn * dn);
            s.ds1 += w[n] / (dn * ad);      // d/dl2 of 1/|n-l2|
            s.ds2 += 2.0 * w[n] / (dn * dn * dn);
        }
        return s;
    };

    auto residual = [&](double a1, const KktSums& sm) {
        double g1 = norm * a1 * a1 * 0.25 * sm.s2 - 1.0;
        double g2 = norm * 0.5 * std::abs(a1) * sm.s1 - target;
        return std::pair<double, double>(g1, g2);
    };

    double l2 = lambda2_init;
    KktSums s = sums(l2);
    double l1 = 2.0 / std::sqrt(norm * s.s2);
    auto [g1, g2] = residual(l1, s);
    double res = std::hypot(g1, g2);
    for (int it = 0; it < 200 && res >= 1e-13; ++it) {
        // Analytic Jacobian of (g1, g2) in (l1, l2).
        double j11 = norm * 0.5 * l1 * s.s2;
        double j12 = norm * 0.25 * l1 * l1 * s.ds2;
        double j21 = norm * 0.5 * s.s1;
        double j22 = norm * 0.5 * l1 * s.ds1;
        double det = j11 * j22 - j12 * j21;
        if (std::abs(det) < 1e-300) break;
        double dl1 = -(j22 * g1 - j12 * g2) / det;
        double dl2 = -(-j21 * g1 + j11 * g2) / det;
        double step = 1.0;
        bool moved = false;
        for (; step > 1e-12; step *= 0.5) {
            double t1 = l1 + step * dl1, t2 = l2 + step * dl2;
            if (t1 <= 0.0) continue;
            KktSums st = sums(t2);
            auto [h1, h2] = residual(t1, st);
            double rt = std::hypot(h1, h2);
            if (rt < res) {
                l1 = t1;
                l2 = t2;
                s = st;
                g1 = h1;
                g2 = h2;
                res = rt;
                moved = true;
                break;
            }
        }
        if (!moved) break;
    }
    if (res < 1e-13) return {l1, l2, 0.0};

    // Safeguard: eliminate lambda1 from the first equation and bisect the
    // remaining scalar equation ratio(l2) = target on the branch side.
    auto ratio = [&](double v2) {
        KktSums sv = sums(v2);
        return norm * sv.s1 / std::sqrt(norm * sv.s2);
    };
    double a, b;  // bracket with ratio(a) < target < ratio(b)
    if (upper_branch) {
        a = static_cast<double>(n_terms);
        b = a;
        for (int i = 0; i < 400 && ratio(b) < target; ++i) b = 2.0 * b + 1.0;
        if (ratio(b) < target) throw NoConvergence("kkt: no upper bracket");
    } else {
        a = -1e-6;
        b = -1.0;
        for (int i = 0; i < 400 && ratio(b) < target; ++i) b *= 2.0;
        if (ratio(b) < target) throw NoConvergence("kkt: no lower bracket");
    }
    for (int it = 0; it < 200 && std::abs(b - a) > 1e-12 * std::max(1.0, std::abs(b)); ++it) {
        double mid = 0.5 * (a + b);
        (ratio(mid) < target ? a : b) = mid;
    }
    l2 = 0.5 * (a + b);
    s = sums(l2);
    l1 = 2.0 / std::sqrt(norm * s.s2);
    std::tie(g1, g2) = residual(l1, s);
    if (std::hypot(g1, g2) >= 1e-10) throw NoConvergence("kkt: bisection did not converge");
    return {l1, l2, 0.0};
}

}  // namespace

EnergyBand kkt_energy_band(double n_b, int m, double eps, double eta, int d) {
    if (eps < 0.0 || eps > 0.5) throw OutOfRange("kkt_energy_band: eps outside [0, 1/2]");
    if (eps >= 0.5) throw ConstraintVacuous();
    if (n_b < 0.0) throw NegativeEnergy();
    if (m < 1) throw OutOfRange("kkt_energy_band: m must be >= 1");
    if (eps == 0.0) {
        EnergyBand band;
        band.ns_min = band.ns_max = n_b;
        band.d = d;
        return band;
    }
    ThermalTotalLaw law{n_b, m};
    if (d <= 0) d = static_cast<int>(2 * law.quantile(1e-12));
    if (law.log_tail_bound(d) > std::log(1e-12))
        throw TruncationTooSmall("kkt_energy_band: truncated mass above 1e-12");
    std::vector<double> log_w(d + 1);
    double wsum = 0.0;
    for (long n = 0; n <= d; ++n) {
        log_w[n] = law.log_w(n);
        wsum += std::exp(log_w[n]);
    }

    double target = 1.0 - 2.0 * eps;
    double mean = law.mean(), sd = law.stddev();
    // The constraint linearizes to 1 - Var/(2 lambda2c^2) = 1 - 2 eps around
    // q = w, so the multipliers sit at lambda2 = mean -+ sd/(2 sqrt(eps)).
    double offset = 0.5 * sd / std::sqrt(eps);
    EnergyBand band;
    band.d = d;
    for (int branch = 0; branch < 2; ++branch) {
        bool upper = branch == 1;
        double init = upper ? mean + offset : mean - offset;
        KktBranchResult r = solve_kkt_branch(log_w, target, init, upper);
        // Mean of q_n = norm*l1^2 w_n / (4 (n - l2)^2); eq (1) makes it a PMF.
        double norm = 1.0 / wsum;
        double e = 0.0, qd = 0.0;
        for (long n = 0; n <= d; ++n) {
            double dn = n - r.lambda2;
            double q = norm * r.lambda1 * r.lambda1 * std::exp(log_w[n]) / (4.0 * dn * dn);
            e += n * q;
            if (n == d) qd = q;
        }
        if (qd > 1e-9) throw TruncationTooSmall("kkt_energy_band: solution mass at truncation");
        double ns = (e / m - eta * n_b) / (1.0 - eta);
        band.lambda1[branch] = r.lambda1;
        band.lambda2[branch] = r.lambda2;
        if (branch == 0)
            band.ns_min = ns;
        else
            band.ns_max = ns;
    }
    if (band.ns_min > band.ns_max) std::swap(band.ns_min, band.ns_max);
    return band;
}

double alice_fidelity_lower_bound(const std::vector<double>& pmf, double eta, double n_b, int m) {
    double g0 = n_b + 1.0;
    double g1 = (1.0 - eta) * n_b + 1.0;
    double nu = nu_factor(g0, g1);
    double base = std::sqrt(1.0 - eta / ((1.0 - eta) * n_b + 1.0));
    double acc = 0.0, pw = 1.0;
    for (double p : pmf) {
        acc += p * pw;
        pw *= base;
    }
    return std::pow(nu, m) * acc;
}

double alice_fidelity_lower_bound(double total_energy, double eta, double n_b, int m) {
    if (total_energy < 0.0) throw NegativeEnergy();
    double g0 = n_b + 1.0;
    double g1 = (1.0 - eta) * n_b + 1.0;
    double nu = nu_factor(g0, g1);
    double base = 1.0 - eta / ((1.0 - eta) * n_b + 1.0);
    return std::pow(nu, m) * std::pow(base, 0.5 * total_energy);
}

namespace {

// ln of the per-mode factor nu (N_B + 1 - N_B/x)(eta N_B (1 - x) + 1).
double floor_log_per_mode(double eta, double n_b, double eps) {
    if (eps < 0.0 || eps > 0.5) throw OutOfRange("ecovert_error_floor: eps outside [0, 1/2]");
    if (eta < 0.0 || eta > 0.4)
        throw ConvergenceConditionViolated("ecovert_error_floor: eta outside (0, 0.4]");
    double x = floor_x(eta, n_b);
    if (!(x >= n_b / (n_b + 1.0) && x <= 1.0)) throw ConvergenceConditionViolated();
    double nu = nu_factor(n_b + 1.0, (1.0 - eta) * n_b + 1.0);
    return std::log(nu) + std::log(n_b + 1.0 - n_b / x) +
           std::log1p(eta * n_b * (1.0 - x));
}

}  // namespace

double ecovert_error_floor(double eta, double n_b, int m, double eps) {
    double log_z = 4.0 * std::log1p(-2.0 * eps) + 2.0 * m * floor_log_per_mode(eta, n_b, eps);
    double z = std::exp(log_z);
    return 0.5 * (1.0 - std::sqrt(std::max(0.0, 1.0 - z)));
}

double ecovert_floor_exponent(double eta, double n_b, int m, double eps) {
    double log_z = 4.0 * std::log1p(-2.0 * eps) + 2.0 * m * floor_log_per_mode(eta, n_b, eps);
    if (log_z < -30.0) {
        // floor ~ z/4, so -ln(2 floor) = ln 2 - ln z.
        return (std::log(2.0) - log_z) / m;
    }
    double floor = 0.5 * (1.0 - std::sqrt(std::max(0.0, 1.0 - std::exp(log_z))));
    return -std::log(2.0 * floor) / m;
}

double willie_trace_norm(double n_s, double eta, double n_b, int m) {
    if (n_s < 0.0 || n_b < 0.0) throw NegativeEnergy();
    if (eta < 0.0 || eta > 1.0) throw OutOfRange("willie_trace_norm: eta outside [0, 1]");
    double n = (1.0 - eta) * n_s + eta * n_b;
    if (std::abs(n - n_b) < 1e-15 * (1.0 + n_b)) return 0.0;
    ThermalTotalLaw law_b{n_b, m}, law_n{n, m};
    double ratio = std::log(n * (n_b + 1.0) / ((n + 1.0) * n_b));
    long n_t = static_cast<long>(std::floor(m * std::log((n + 1.0) / (n_b + 1.0)) / ratio));
    long top = std::max(law_b.quantile(1e-14), law_n.quantile(1e-14));
    double low = 0.0, high = 0.0;
    for (long k = 0; k <= top; ++k) {
        double diff = std::exp(law_b.log_w(k)) - std::exp(law_n.log_w(k));
        if (k <= n_t)
            low += diff;
        else
            high -= diff;
    }
    return std::clamp(std::abs(low) + std::abs(high), 0.0, 2.0);
}

double max_covert_brightness(double eta, double n_b, int m, double eps) {
    if (eps < 0.0 || eps > 0.5) throw OutOfRange("max_covert_brightness: eps outside [0, 1/2]");
    if (eps == 0.0) return n_b;
    double budget = 4.0 * eps;
    double lo = n_b;
    double hi = n_b * (1.0 + 1.0 / std::sqrt(static_cast<double>(m))) * 2.0;
    if (willie_trace_norm(hi, eta, n_b, m) <= budget) throw BracketFailure();
    for (int it = 0; it < 200 && (hi - lo) > 1e-8 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        if (willie_trace_norm(mid, eta, n_b, m) <= budget)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

double ecovert_probe_exponent(const CovertScenario& sc) {
    if (sc.probe == ProbeKind::Tmsv) {
        auto [s0, s1] = tmsv_return_pair(sc.eta, sc.n_b, sc.probe_energy);
        return chernoff(s0, s1).exponent;
    }
    if (sc.probe == ProbeKind::Gcs) return gcs_exponent(sc.eta, sc.n_b, sc.probe_energy);
    throw OutOfRange("ecovert_probe_exponent: probe must be tmsv or gcs");
}

double kkt_fidelity_tightness(double eta, double n_b, int m, double eps, int d) {
    if (eps < 0.0 || eps >= 0.5) throw OutOfRange("kkt_fidelity_tightness: eps outside [0, 1/2)");
    if (eps == 0.0) return 1.0;
    ThermalTotalLaw law{n_b, m};
    if (d <= 0) d = static_cast<int>(2 * law.quantile(1e-12));

    double g_w = eta * n_b + 1.0;
    double eta_w = (1.0 - eta) / g_w;
    double xi = std::sqrt(1.0 - eta / ((1.0 - eta) * n_b + 1.0));
    double x = 1.0 - (1.0 - xi) / (g_w * (eta_w + xi - 1.0) - xi + 1.0);
    double mu = eta * n_b * (1.0 - x) + 1.0;
    double nu = nu_factor(n_b + 1.0, (1.0 - eta) * n_b + 1.0);
    double log_numu = m * (std::log(nu) + std::log(mu));

    std::vector<double> w(d + 1), c(d + 1);
    double wsum = 0.0;
    for (long n = 0; n <= d; ++n) {
        w[n] = std::exp(law.log_w(n));
        wsum += w[n];
        c[n] = std::exp(log_numu + n * std::log(x));
    }
    double norm = 1.0 / wsum;
    double target = 1.0 - 2.0 * eps;

    // Scalar reduction: lambda1 = 2/sqrt(norm S2), then match the covert sum.
    auto ratio_fn = [&](double l2) {
        double s1 = 0.0, s2 = 0.0;
        for (long n = 0; n <= d; ++n) {
            double den = c[n] + l2;
            s1 += w[n] / std::abs(den);
            s2 += w[n] / (den * den);
        }
        return norm * s1 / std::sqrt(norm * s2);
    };
    // ratio_fn -> 1 as l2 -> inf and decreases toward small l2; bracket it.
    double hi = 1.0;
    while (ratio_fn(hi) < target) {
        hi *= 4.0;
        if (hi > 1e280) throw NoConvergence("kkt_fidelity_tightness: no upper bracket");
    }
    double lo = hi;
    while (ratio_fn(lo) >= target) {
        lo /= 4.0;
        if (lo < 1e-280) throw NoConvergence("kkt_fidelity_tightness: no lower bracket");
    }
    for (int it = 0; it < 300 && (hi - lo) > 1e-14 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        if (ratio_fn(mid) >= target)
            hi = mid;
        else
            lo = mid;
    }
    double l2 = 0.5 * (lo + hi);
    double s2 = 0.0;
    for (long n = 0; n <= d; ++n) {
        double den = c[n] + l2;
        s2 += w[n] / (den * den);
    }
    double l1 = 2.0 / std::sqrt(norm * s2);

    double fid_min = 0.0;
    for (long n = 0; n <= d; ++n) {
        double den = c[n] + l2;
        double q = norm * l1 * l1 * w[n] / (4.0 * den * den);
        fid_min += q * c[n];
    }
    double bound = target * target * std::exp(log_numu) *
                   std::pow(n_b + 1.0 - n_b / x, m);
    // fid_min already carries nu^M mu^M through c[n].
    double minimum = fid_min;
    return bound / minimum;
}

double nps_error_lower_bound(double n_s_total, double eta, double n_b) {
    if (n_s_total < 0.0 || n_b < 0.0) throw NegativeEnergy();
    if (eta < 0.0 || eta > 1.0) throw OutOfRange("nps_error_lower_bound: eta outside [0, 1]");
    double beta = -std::log1p(-eta / (n_b + 1.0));
    return 0.25 * std::exp(-beta * n_s_total);
}

}  // namespace qilab
