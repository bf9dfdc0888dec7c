#include "qilab/spes.hpp"

#include <Eigen/Dense>
#include <limits>
#include <unsupported/Eigen/KroneckerProduct>

#include "qilab/channels.hpp"

namespace qilab {

namespace {

// --- correlator engine over the three modes (S, I, B) -----------------------
//
// The detector arms are real linear combinations of a_S, a_I, a_B. Fourth
// moments expand into at most 81 strings a_i^+ a_j a_k^+ a_l; each string
// factors into an (S, I) part evaluated on the SPES state with small dense
// matrices and a B part evaluated on the thermal state by normal ordering.

constexpr int kSpesDim = 4;  // per-mode dim; length-4 strings raise at most to n=3

struct SpesCorrelators {
    Eigen::VectorXcd psi;                 // SPES on (S, I), dim 16
    Eigen::MatrixXcd a_s, a_i;            // mode operators on the joint space
    double n_bar;                         // thermal brightness of B

    explicit SpesCorrelators(double n_s, double thermal_brightness) : n_bar(thermal_brightness) {
        Eigen::MatrixXcd a = annihilation_matrix(kSpesDim);
        Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(kSpesDim, kSpesDim);
        a_s = Eigen::kroneckerProduct(a, id).eval();
        a_i = Eigen::kroneckerProduct(id, a).eval();
        psi = Eigen::VectorXcd::Zero(kSpesDim * kSpesDim);
        psi(0 * kSpesDim + 1) = std::sqrt(1.0 - n_s);  // |0>_S |1>_I
        psi(1 * kSpesDim + 0) = std::sqrt(n_s);        // |1>_S |0>_I
    }

    // <a^+p a^q>_thermal = delta_pq p! n_bar^p after normal ordering.
    double thermal_string(std::vector<int> ops) const {  // +1 creator, -1 annihilator
        // Find an annihilator immediately left of a creator and commute.
        for (size_t p = 0; p + 1 < ops.size(); ++p) {
            if (ops[p] == -1 && ops[p + 1] == +1) {
                std::vector<int> swapped = ops;
                std::swap(swapped[p], swapped[p + 1]);
                std::vector<int> contracted;
                for (size_t q = 0; q < ops.size(); ++q)
                    if (q != p && q != p + 1) contracted.push_back(ops[q]);
                return thermal_string(swapped) + thermal_string(contracted);
            }
        }
        int creators = 0, annihilators = 0;
        for (int o : ops) (o == 1 ? creators : annihilators)++;
        if (creators != annihilators) return 0.0;
        double v = 1.0;
        for (int k = 1; k <= creators; ++k) v *= k * n_bar;
        return v;
    }

    // Expectation of a string over modes in {0=S, 1=I, 2=B}; `dagger` marks
    // creation operators. Order within each mode is preserved.
    double evaluate(const std::vector<std::pair<int, bool>>& string) const {
        Eigen::MatrixXcd si = Eigen::MatrixXcd::Identity(psi.size(), psi.size());
        std::vector<int> b_ops;
        for (const auto& [mode, dag] : string) {
            if (mode == 2) {
                b_ops.push_back(dag ? +1 : -1);
            } else {
                const Eigen::MatrixXcd& op = mode == 0 ? a_s : a_i;
                si = si * (dag ? op.adjoint() : op);
            }
        }
        std::complex<double> si_val = psi.dot(si * psi);
        return si_val.real() * thermal_string(b_ops);
    }
};

// Quadratic photocount forms Q = (c . a)^+ (c . a); coefficients over (S, I, B).
using Coef = Eigen::Vector3d;

double mean_q(const SpesCorrelators& corr, const Coef& c) {
    double acc = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (c(i) == 0.0 || c(j) == 0.0) continue;
            acc += c(i) * c(j) * corr.evaluate({{i, true}, {j, false}});
        }
    return acc;
}

double second_q(const SpesCorrelators& corr, const Coef& c, const Coef& d) {
    double acc = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    double w = c(i) * c(j) * d(k) * d(l);
                    if (w == 0.0) continue;
                    acc += w * corr.evaluate(
                                   {{i, true}, {j, false}, {k, true}, {l, false}});
                }
    return acc;
}

struct ArmCoefs {
    Coef x, y;
};

// R = sqrt(eta_h) S + sqrt(1 - eta_h) B; X/Y are the mixing-splitter arms
// with the upper sign convention.
ArmCoefs arm_coefs(double eta_h, double kappa) {
    Coef r(std::sqrt(eta_h), 0.0, std::sqrt(1.0 - eta_h));
    Coef idler(0.0, 1.0, 0.0);
    ArmCoefs a;
    a.x = std::sqrt(kappa) * r + std::sqrt(1.0 - kappa) * idler;
    a.y = std::sqrt(1.0 - kappa) * r - std::sqrt(kappa) * idler;
    return a;
}

struct HypMoments {
    double mean, var;
};

HypMoments photocount_moments(double n_s, double eta_h, double n_bg, double kappa,
                              bool difference) {
    SpesCorrelators corr(n_s, n_bg);
    ArmCoefs arms = arm_coefs(eta_h, kappa);
    double mx = mean_q(corr, arms.x);
    if (!difference) {
        double sx = second_q(corr, arms.x, arms.x);
        return {mx, sx - mx * mx};
    }
    double my = mean_q(corr, arms.y);
    double sxx = second_q(corr, arms.x, arms.x);
    double syy = second_q(corr, arms.y, arms.y);
    double sxy = second_q(corr, arms.x, arms.y);
    double syx = second_q(corr, arms.y, arms.x);
    double mean = mx - my;
    double second = sxx - sxy - syx + syy;
    return {mean, second - mean * mean};
}

GaussianMoments1D detector_moments(const NpsScenario& sc, double kappa, bool difference) {
    if (kappa < 0.0 || kappa > 1.0) throw OutOfRange("mode-mixing kappa outside [0, 1]");
    if (sc.n_s < 0.0 || sc.n_s > 1.0) throw OutOfRange("spes: N_S outside [0, 1]");
    HypMoments h0 = photocount_moments(sc.n_s, 0.0, sc.n_b, kappa, difference);
    HypMoments h1 = photocount_moments(sc.n_s, sc.eta, sc.n_b / (1.0 - sc.eta), kappa, difference);
    return {h0.mean, std::sqrt(std::max(0.0, h0.var)), h1.mean,
            std::sqrt(std::max(0.0, h1.var))};
}

}  // namespace

int nps_default_cutoff(const NpsScenario& sc) {
    return cutoff_for_tail(sc.n_b / (1.0 - sc.eta), 1e-10) + 3;
}

FockOperator spes_state(double n_s, int signal_cutoff) {
    if (n_s < 0.0 || n_s > 1.0) throw OutOfRange("spes_state: N_S outside [0, 1]");
    if (signal_cutoff < 2) throw OutOfRange("spes_state: signal cutoff below 2");
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(2 * signal_cutoff);
    psi(0 * signal_cutoff + 1) = std::sqrt(n_s);        // |0>_I |1>_S
    psi(1 * signal_cutoff + 0) = std::sqrt(1.0 - n_s);  // |1>_I |0>_S
    return FockOperator({2, signal_cutoff}, psi * psi.adjoint());
}

std::pair<FockOperator, FockOperator> spes_returned_states(const NpsScenario& sc) {
    int cutoff = sc.cutoff > 0 ? sc.cutoff : nps_default_cutoff(sc);
    double g = sc.n_b + 1.0;
    double eta_tilde = sc.eta / g;
    double t = sc.n_b / (sc.n_b + 1.0);

    // rho0 = Tr_S(Psi) (x) thermal(N_B) on (idler, signal).
    FockOperator idler({2}, (Eigen::MatrixXcd(2, 2) << sc.n_s, 0.0, 0.0, 1.0 - sc.n_s).finished());
    FockOperator rho0 = tensor(idler, fock_thermal(sc.n_b, cutoff));

    // Five-term closed form of the H1 state.
    Eigen::MatrixXcd m1 = Eigen::MatrixXcd::Zero(2 * cutoff, 2 * cutoff);
    double c1 = (1.0 - sc.n_s) / (sc.n_b + 1.0);
    double c2 = sc.n_s * (1.0 - sc.eta + sc.n_b) / std::pow(sc.n_b + 1.0, 2);
    double c3 = sc.eta * sc.n_s / std::pow(sc.n_b + 1.0, 3);
    double c4 = std::sqrt(sc.eta * sc.n_s * (1.0 - sc.n_s)) / std::pow(sc.n_b + 1.0, 2);
    double tn = 1.0;
    for (int n = 0; n < cutoff; ++n) {
        long i1n = 1 * cutoff + n;  // |1>_I |n>_S
        long i0n = 0 * cutoff + n;
        m1(i1n, i1n) += c1 * tn;
        m1(i0n, i0n) += c2 * tn;
        if (n + 1 < cutoff) {
            long i0n1 = 0 * cutoff + n + 1;
            m1(i0n1, i0n1) += c3 * (n + 1.0) * tn;
            m1(i1n, i0n1) += c4 * std::sqrt(n + 1.0) * tn;
            m1(i0n1, i1n) += c4 * std::sqrt(n + 1.0) * tn;
        }
        tn *= t;
    }
    FockOperator rho1_closed({2, cutoff}, std::move(m1));

    // Channel-composition construction of the same state.
    FockOperator psi = spes_state(sc.n_s, cutoff);
    FockOperator after_loss = apply_fock(PureLoss{eta_tilde}, psi, 1);
    FockOperator rho1_chan = apply_fock(Qla{g}, after_loss, 1, 1e-8);

    double mismatch = (rho1_closed.matrix - rho1_chan.matrix).cwiseAbs().maxCoeff();
    if (mismatch > 1e-10) throw ClosedFormMismatch();
    return {std::move(rho0), std::move(rho1_closed)};
}

std::pair<GaussianState, GaussianState> nps_pair(NpsProbe probe, const NpsScenario& sc) {
    double a_nps = sc.eta * sc.n_s + sc.n_b + 0.5;  // eta N_S + (1-eta) N_B/(1-eta) + 1/2
    if (probe == NpsProbe::Coherent) {
        GaussianState h0 = make_thermal(sc.n_b);
        GaussianState h1 =
            make_displaced_thermal(std::sqrt(sc.eta * sc.n_s), a_nps - 0.5 - sc.eta * sc.n_s);
        return {h0, h1};
    }
    if (probe == NpsProbe::Tmsv) {
        double s = sc.n_s + 0.5;
        double b = sc.n_b + 0.5;
        double c = std::sqrt(sc.eta * sc.n_s * (sc.n_s + 1.0));
        Eigen::MatrixXd v0 = Eigen::MatrixXd::Zero(4, 4), v1 = Eigen::MatrixXd::Zero(4, 4);
        v0(0, 0) = v0(2, 2) = b;
        v0(1, 1) = v0(3, 3) = s;
        v1(0, 0) = v1(2, 2) = a_nps;
        v1(1, 1) = v1(3, 3) = s;
        v1(0, 1) = v1(1, 0) = c;
        v1(2, 3) = v1(3, 2) = -c;
        return {GaussianState(2, Eigen::VectorXd::Zero(4), v0),
                GaussianState(2, Eigen::VectorXd::Zero(4), v1)};
    }
    throw OutOfRange("nps_pair: SPES has no Gaussian description");
}

double bhattacharyya_exponent_nps(NpsProbe probe, const NpsScenario& sc) {
    if (sc.n_s == 0.0) return 0.0;
    if (probe == NpsProbe::Spes) {
        auto [rho0, rho1] = spes_returned_states(sc);
        return -std::log(s_overlap_fock(rho0, rho1, 0.5));
    }
    auto [s0, s1] = nps_pair(probe, sc);
    return bhattacharyya(s0, s1).exponent;
}

Eigen::Matrix4cd ri_covariance(NpsProbe probe, const NpsScenario& sc) {
    Eigen::Matrix4cd v = Eigen::Matrix4cd::Zero();
    double sig;
    if (probe == NpsProbe::Tmsv) {
        sig = std::sqrt(sc.eta * sc.n_s * (sc.n_s + 1.0));
        v(0, 0) = sc.eta * sc.n_s + sc.n_b + 1.0;  // <a_R a_R+>
        v(1, 1) = sc.n_s + 1.0;                    // <a_I a_I+>
        v(2, 2) = sc.eta * sc.n_s + sc.n_b;        // <a_R+ a_R>
        v(3, 3) = sc.n_s;                          // <a_I+ a_I>
        v(0, 3) = v(3, 0) = sig;                   // <a_R a_I>
        v(1, 2) = v(2, 1) = sig;
    } else if (probe == NpsProbe::Spes) {
        sig = std::sqrt(sc.eta * sc.n_s * (1.0 - sc.n_s));
        v(0, 0) = sc.eta * sc.n_s + sc.n_b + 1.0;
        v(1, 1) = 2.0 - sc.n_s;
        v(2, 2) = sc.eta * sc.n_s + sc.n_b;
        v(3, 3) = 1.0 - sc.n_s;
        v(0, 1) = v(1, 0) = sig;  // <a_R a_I+>
        v(2, 3) = v(3, 2) = sig;  // <a_R+ a_I>
    } else {
        throw OutOfRange("ri_covariance: tmsv or spes only");
    }
    return v;
}

ThresholdResult threshold_exponent(const GaussianMoments1D& m) {
    if (m.sigma0 < 0.0 || m.sigma1 < 0.0) throw OutOfRange("threshold_exponent: negative sigma");
    double ssum = m.sigma0 + m.sigma1;
    if (ssum == 0.0) {
        if (m.mu0 == m.mu1) return {m.mu0, 0.0};
        return {0.5 * (m.mu0 + m.mu1), std::numeric_limits<double>::infinity()};
    }
    double t = (m.mu1 * m.sigma0 + m.mu0 * m.sigma1) / ssum;
    double z = (m.mu1 - m.mu0) / ssum;
    return {t, 0.5 * z * z};
}

GaussianMoments1D mmpc_moments(const NpsScenario& sc, double kappa) {
    return detector_moments(sc, kappa, false);
}

GaussianMoments1D mmpdc_moments(const NpsScenario& sc, double kappa) {
    return detector_moments(sc, kappa, true);
}

double mmpc_exponent(const NpsScenario& sc, double kappa) {
    return threshold_exponent(mmpc_moments(sc, kappa)).chi;
}

double mmpdc_exponent(const NpsScenario& sc, double kappa) {
    return threshold_exponent(mmpdc_moments(sc, kappa)).chi;
}

double mmpc_weak_signal_exponent(const NpsScenario& sc, double kappa) {
    double denom = 3.0 * sc.n_b - kappa * (-sc.n_b * sc.n_b + 2.0 * sc.n_b + 1.0) + 1.0;
    return (1.0 - kappa) * sc.eta * sc.n_s / (2.0 * denom);
}

double mmpdc_weak_signal_exponent(const NpsScenario& sc) {
    return sc.eta * sc.n_s / (6.0 * sc.n_b + 2.0);
}

namespace {

OptimizedDetector optimize_kappa(const std::function<double(double)>& chi_of_kappa) {
    // Coarse log-spaced scan, then golden refinement around the best point.
    double best_k = 0.5, best = -1.0;
    for (int i = 0; i <= 70; ++i) {
        double k = std::exp(std::log(1e-7) + i * (std::log(0.999999) - std::log(1e-7)) / 70.0);
        double v = chi_of_kappa(k);
        if (v > best) {
            best = v;
            best_k = k;
        }
    }
    double lo = std::max(1e-9, best_k / 4.0), hi = std::min(1.0 - 1e-9, best_k * 4.0);
    GoldenResult g = golden_min([&](double k) { return -chi_of_kappa(k); }, lo, hi, 1e-9, 80);
    if (-g.value >= best) return {g.x, -g.value};
    return {best_k, best};
}

}  // namespace

OptimizedDetector mmpc_exponent_optimized(const NpsScenario& sc) {
    return optimize_kappa([&](double k) { return mmpc_exponent(sc, k); });
}

OptimizedDetector mmpdc_exponent_optimized(const NpsScenario& sc) {
    return optimize_kappa([&](double k) { return mmpdc_exponent(sc, k); });
}

double mmpc_small_kappa_limit(const NpsScenario& sc) {
    // chi(kappa) = c0 + c1 k + c2/k + c3 sqrt(k) captures the leading
    // corrections on the small-kappa plateau; c0 is the limit value.
    std::vector<double> ks;
    double k0 = 1e-4;
    for (int i = 0; i < 6; ++i) ks.push_back(k0 * std::pow(2.0, i));
    Eigen::MatrixXd a(ks.size(), 4);
    Eigen::VectorXd b(ks.size());
    for (size_t i = 0; i < ks.size(); ++i) {
        double k = ks[i];
        a(i, 0) = 1.0;
        a(i, 1) = k;
        a(i, 2) = 1.0 / k;
        a(i, 3) = std::sqrt(k);
        b(i) = mmpc_exponent(sc, k);
    }
    Eigen::Vector4d c = a.colPivHouseholderQr().solve(b);
    return c(0);
}

}  // namespace qilab
