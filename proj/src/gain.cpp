#include "qilab/gain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qilab {

namespace {

void check_gain(double g) {
    if (g < 1.0) throw OutOfRange("gain must be >= 1");
}

// f = sech^P tanh^Q and its first two tau-derivatives, P = 2(n+1), Q = 2a.
struct LadderTerm {
    double f, df, d2f;
};

LadderTerm ladder_term(double log_coef, int p, int q, double tau) {
    double th = std::tanh(tau);
    double sh2 = 1.0 / (std::cosh(tau) * std::cosh(tau));  // sech^2
    double logf = log_coef + 0.5 * p * std::log(sh2) + (q > 0 ? q * std::log(th) : 0.0);
    double f = std::exp(logf);
    double u = q * sh2 / th - p * th;  // d log f / d tau
    double du = -q * (2.0 * sh2 + sh2 * sh2 / (th * th)) - p * sh2;
    return {f, f * u, f * (u * u + du)};
}

}  // namespace

double tau_of_gain(double g) {
    check_gain(g);
    return std::acosh(std::sqrt(g));
}

double amplifier_nu(double g, double g_prime) {
    check_gain(g);
    check_gain(g_prime);
    return 1.0 / (std::sqrt(g * g_prime) - std::sqrt((g - 1.0) * (g_prime - 1.0)));
}

double nds_output_fidelity(const std::vector<double>& pmf, int m, double g, double g_prime) {
    double nu = amplifier_nu(g, g_prime);
    double acc = 0.0, pw = std::pow(nu, m);
    for (double p : pmf) {
        acc += p * pw;
        pw *= nu;
    }
    return acc;
}

QfiNds qfi_nds(double n, double m, double g) {
    check_gain(g);
    QfiNds out;
    out.k_tau = 4.0 * (n + m);
    if (g == 1.0) throw GainAtUnity();
    out.k_g = (n + m) / (g * (g - 1.0));
    return out;
}

double qfi_coherent(double n, double m, double g) {
    check_gain(g);
    if (g == 1.0) throw GainAtUnity();
    return n / (g * (2.0 * g - 1.0)) + m / (g * (g - 1.0));
}

HomHetFi fi_homodyne_heterodyne(double n, double m, double g) {
    check_gain(g);
    return {n / (g * (2.0 * g - 1.0)), (0.5 * n + m) / (g * g)};
}

double estimate_gain(double y_total, double n, double m, double eta_d) {
    if (eta_d <= 0.0 || eta_d > 1.0) throw OutOfRange("estimate_gain: eta_d outside (0, 1]");
    return (y_total / eta_d + m) / (n + m);
}

double mse_number(double n, double m, double g, double eta_d) {
    check_gain(g);
    if (eta_d <= 0.0 || eta_d > 1.0) throw OutOfRange("mse_number: eta_d outside (0, 1]");
    double base = g * (g - 1.0) / (n + m);
    double excess = (1.0 - eta_d) / (eta_d * (n + m)) * (g - m / (n + m));
    return base + excess;
}

double mse_coherent(double n, double m, double g, double eta_d) {
    return mse_number(n, m, g, eta_d) + g * g * n / ((n + m) * (n + m));
}

double qfi_coherent_lossy(double n, double m, double g, double eta_d) {
    check_gain(g);
    if (g == 1.0) throw GainAtUnity();
    if (eta_d < 0.0 || eta_d > 1.0) throw OutOfRange("qfi_coherent_lossy: eta_d outside [0, 1]");
    return eta_d * n / (g * (2.0 * eta_d * (g - 1.0) + 1.0)) +
           eta_d * m / ((g - 1.0) * (eta_d * (g - 1.0) + 1.0));
}

double qfi_number_lossy(const std::vector<int>& photons_per_mode, double g, double eta_d,
                        int cutoff) {
    check_gain(g);
    if (g == 1.0) throw GainAtUnity();
    if (eta_d < 0.0 || eta_d > 1.0) throw OutOfRange("qfi_number_lossy: eta_d outside [0, 1]");
    if (eta_d == 0.0) return 0.0;
    double tau = tau_of_gain(g);
    double log_ed = std::log(eta_d);
    bool lossless = eta_d == 1.0;
    double log_om = lossless ? 0.0 : std::log1p(-eta_d);

    double fi_tau = 0.0;
    for (int n : photons_per_mode) {
        if (n < 0) throw OutOfRange("qfi_number_lossy: negative photon number");
        double mode_fi = 0.0, mass = 0.0;
        for (int k = 0; k < cutoff; ++k) {
            double p = 0.0, dp = 0.0, d2p = 0.0;
            if (lossless) {
                // Only a = k - n contributes.
                int a = k - n;
                if (a >= 0) {
                    double lc = log_binomial(n + a, a);
                    LadderTerm t = ladder_term(lc, 2 * (n + 1), 2 * a, tau);
                    p = t.f;
                    dp = t.df;
                    d2p = t.d2f;
                }
            } else {
                int a = std::max(k - n, 0);
                int quiet = 0;
                for (; quiet < 3; ++a) {
                    if (a > 1000000) throw NoConvergence("qfi_number_lossy: ladder sum stalled");
                    double lc = log_binomial(n + a, a) + log_binomial(n + a, k) + k * log_ed +
                                (n + a - k) * log_om;
                    LadderTerm t = ladder_term(lc, 2 * (n + 1), 2 * a, tau);
                    p += t.f;
                    dp += t.df;
                    d2p += t.d2f;
                    double rel = std::abs(t.f) / std::max(p, 1e-300);
                    quiet = rel < 1e-14 ? quiet + 1 : 0;
                }
            }
            if (p > 0.0) {
                mode_fi += dp * dp / p - d2p;
                mass += p;
            }
        }
        if (mass < 1.0 - 1e-12) throw CutoffOverflow();
        fi_tau += mode_fi;
    }
    return fi_tau / (4.0 * g * (g - 1.0));
}

double threshold_gain(double eta_d, double n, double m) {
    if (eta_d <= 0.0 || eta_d > 1.0) throw OutOfRange("threshold_gain: eta_d outside (0, 1]");
    auto gap = [&](double g) { return mse_number(n, m, g, eta_d) - 1.0 / qfi_coherent(n, m, g); };
    double lo = 1.0 + 1e-9, hi = 100.0;
    if (gap(lo) <= 0.0) return 1.0;  // photocount already beats the coherent QCRB
    if (gap(hi) >= 0.0) throw BracketFailure("threshold_gain: no crossing below G = 100");
    for (int it = 0; it < 200 && (hi - lo) > 1e-8 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        (gap(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

BuresResult ecb_distance(double n, int m, double g, double g_prime) {
    if (n < 0.0) throw NegativeEnergy();
    double nu = amplifier_nu(g, g_prime);
    double fl = std::floor(n);
    double frac = n - fl;
    double f = std::pow(nu, m) *
               ((1.0 - frac) * std::pow(nu, fl) + frac * std::pow(nu, fl + 1.0));
    return {std::sqrt(std::max(0.0, 1.0 - f)), f};
}

BuresResult cecb_distance(double n, int m, double g, double g_prime) {
    if (n < 0.0) throw NegativeEnergy();
    double nu = amplifier_nu(g, g_prime);
    double tau = tau_of_gain(g), tau_p = tau_of_gain(g_prime);
    double dcosh = std::cosh(tau_p) - std::cosh(tau);
    double denom = 2.0 * (std::sinh(tau_p) * std::sinh(tau_p) +
                          std::sinh(tau) * std::sinh(tau) + 1.0);
    double f = std::pow(nu, m) * std::exp(-n * dcosh * dcosh / denom);
    return {std::sqrt(std::max(0.0, 1.0 - f)), f};
}

double schmidt_fisher_information(const std::vector<double>& per_mode_pmf, int m, double g,
                                  int cutoff) {
    check_gain(g);
    if (g == 1.0) throw GainAtUnity();
    double tau = tau_of_gain(g);
    double th = std::tanh(tau);
    double sh2 = 1.0 / (std::cosh(tau) * std::cosh(tau));
    double log_s = std::log(sh2), log_t = std::log(th * th);

    double fi = 0.0;
    for (size_t x = 0; x < per_mode_pmf.size(); ++x) {
        double px = per_mode_pmf[x];
        if (px == 0.0) continue;
        double mass = 0.0, acc = 0.0;
        for (int a = 0; a < cutoff; ++a) {
            double la = (a > 0 ? log_binomial(static_cast<double>(x) + a, a) : 0.0) +
                        (x + 1.0) * log_s + a * log_t;
            double w = std::exp(la);
            double score = 2.0 * a * sh2 / th - 2.0 * (x + 1.0) * th;
            acc += w * score * score;
            mass += w;
        }
        if (mass < 1.0 - 1e-12) throw CutoffOverflow();
        fi += px * acc;
    }
    return m * fi;
}

}  // namespace qilab
