#include "qilab/channels.hpp"

#include <limits>

namespace qilab {

namespace {

void scale_mode(GaussianState& s, int mode, double factor, double added_variance) {
    int m = s.modes;
    Eigen::VectorXd d = Eigen::VectorXd::Ones(2 * m);
    d(mode) = d(m + mode) = factor;
    s.mean = d.asDiagonal() * s.mean;
    s.cov = d.asDiagonal() * s.cov * d.asDiagonal();
    s.cov(mode, mode) += added_variance;
    s.cov(m + mode, m + mode) += added_variance;
}

// Kraus ladder coefficient tables in the log domain. For loss,
// K_l |n> = sqrt(C(n, l) eta^(n-l) (1-eta)^l) |n-l>; for the amplifier,
// A_a |n> = sqrt(C(n+a, a)) sech^(n+1) tanh^a |n+a>.
double loss_coef(int n, int l, double log_eta, double log_one_minus_eta) {
    if (l > n) return 0.0;
    if (l == 0 && log_one_minus_eta == -std::numeric_limits<double>::infinity())
        return std::exp(0.5 * n * log_eta);
    if (log_eta == -std::numeric_limits<double>::infinity() && l != n) return 0.0;
    double lg = log_binomial(n, l);
    double le = (n - l) * log_eta;
    double lo = l * log_one_minus_eta;
    if (l == n) le = 0.0;
    if (l == 0) lo = 0.0;
    return std::exp(0.5 * (lg + le + lo));
}

double qla_coef(int n, int a, double log_sech2, double log_tanh2) {
    if (a == 0) return std::exp(0.5 * (n + 1) * log_sech2);
    if (log_tanh2 == -std::numeric_limits<double>::infinity()) return 0.0;
    return std::exp(0.5 * (log_binomial(n + a, a) + (n + 1) * log_sech2 + a * log_tanh2));
}

struct ModeView {
    long left, dm, right;
};

ModeView mode_view(const FockOperator& rho, int mode) {
    int k = static_cast<int>(rho.mode_dims.size());
    if (mode < 0 || mode >= k) throw BadModeIndex();
    ModeView v{1, rho.mode_dims[mode], 1};
    for (int i = 0; i < mode; ++i) v.left *= rho.mode_dims[i];
    for (int i = mode + 1; i < k; ++i) v.right *= rho.mode_dims[i];
    return v;
}

FockOperator apply_loss_fock(const FockOperator& rho, int mode, double eta) {
    ModeView v = mode_view(rho, mode);
    int dm = static_cast<int>(v.dm);
    double log_eta = eta > 0.0 ? std::log(eta) : -std::numeric_limits<double>::infinity();
    double log_ome = eta < 1.0 ? std::log1p(-eta) : -std::numeric_limits<double>::infinity();
    std::vector<double> coef(static_cast<size_t>(dm) * dm, 0.0);
    for (int n = 0; n < dm; ++n)
        for (int l = 0; l <= n; ++l) coef[static_cast<size_t>(l) * dm + n] = loss_coef(n, l, log_eta, log_ome);

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.dim(), rho.dim());
    for (long li = 0; li < v.left; ++li)
        for (long lj = 0; lj < v.left; ++lj)
            for (int m = 0; m < dm; ++m)
                for (int mp = 0; mp < dm; ++mp) {
                    int lmax = dm - 1 - std::max(m, mp);
                    for (long ri = 0; ri < v.right; ++ri)
                        for (long rj = 0; rj < v.right; ++rj) {
                            std::complex<double> acc = 0.0;
                            for (int l = 0; l <= lmax; ++l) {
                                double w = coef[static_cast<size_t>(l) * dm + m + l] *
                                           coef[static_cast<size_t>(l) * dm + mp + l];
                                if (w == 0.0) continue;
                                acc += w * rho.matrix((li * dm + m + l) * v.right + ri,
                                                      (lj * dm + mp + l) * v.right + rj);
                            }
                            out((li * dm + m) * v.right + ri, (lj * dm + mp) * v.right + rj) = acc;
                        }
                }
    return FockOperator(rho.mode_dims, std::move(out), rho.trace_target);
}

FockOperator apply_qla_fock(const FockOperator& rho, int mode, double gain) {
    ModeView v = mode_view(rho, mode);
    int dm = static_cast<int>(v.dm);
    double sech2 = 1.0 / gain;          // sech^2 theta
    double tanh2 = 1.0 - 1.0 / gain;    // tanh^2 theta
    double log_s = std::log(sech2);
    double log_t = tanh2 > 0.0 ? std::log(tanh2) : -std::numeric_limits<double>::infinity();
    std::vector<double> coef(static_cast<size_t>(dm) * dm, 0.0);
    for (int n = 0; n < dm; ++n)
        for (int a = 0; a + n < dm; ++a) coef[static_cast<size_t>(a) * dm + n] = qla_coef(n, a, log_s, log_t);

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.dim(), rho.dim());
    for (long li = 0; li < v.left; ++li)
        for (long lj = 0; lj < v.left; ++lj)
            for (int m = 0; m < dm; ++m)
                for (int mp = 0; mp < dm; ++mp) {
                    int amax = std::min(m, mp);
                    for (long ri = 0; ri < v.right; ++ri)
                        for (long rj = 0; rj < v.right; ++rj) {
                            std::complex<double> acc = 0.0;
                            for (int a = 0; a <= amax; ++a) {
                                double w = coef[static_cast<size_t>(a) * dm + m - a] *
                                           coef[static_cast<size_t>(a) * dm + mp - a];
                                if (w == 0.0) continue;
                                acc += w * rho.matrix((li * dm + m - a) * v.right + ri,
                                                      (lj * dm + mp - a) * v.right + rj);
                            }
                            out((li * dm + m) * v.right + ri, (lj * dm + mp) * v.right + rj) = acc;
                        }
                }
    return FockOperator(rho.mode_dims, std::move(out), rho.trace_target);
}

}  // namespace

LossGainCascade decompose_thermal_loss(double eta, double n_b) {
    if (eta < 0.0 || eta > 1.0) throw OutOfRange("decompose_thermal_loss: eta outside [0, 1]");
    if (n_b < 0.0) throw NegativeEnergy();
    double gain = (1.0 - eta) * n_b + 1.0;
    return {eta / gain, gain};
}

void validate(const BosonicChannel& ch) {
    std::visit(
        [](auto&& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, PureLoss>) {
                if (c.eta < 0.0 || c.eta > 1.0) throw OutOfRange("PureLoss: eta outside [0, 1]");
            } else if constexpr (std::is_same_v<T, Qla>) {
                if (c.gain < 1.0) throw OutOfRange("Qla: gain below 1");
            } else {
                if (c.eta < 0.0 || c.eta > 1.0) throw OutOfRange("ThermalLoss: eta outside [0, 1]");
                if (c.n_b < 0.0) throw NegativeEnergy();
            }
        },
        ch);
}

GaussianState apply_gaussian(const BosonicChannel& ch, const GaussianState& state, int mode) {
    validate(ch);
    if (mode < 0 || mode >= state.modes) throw BadModeIndex();
    GaussianState s = state.reordered(Ordering::XXPP);
    std::visit(
        [&](auto&& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, PureLoss>) {
                scale_mode(s, mode, std::sqrt(c.eta), 0.5 * (1.0 - c.eta));
            } else if constexpr (std::is_same_v<T, Qla>) {
                scale_mode(s, mode, std::sqrt(c.gain), 0.5 * (c.gain - 1.0));
            } else {
                auto cas = decompose_thermal_loss(c.eta, c.n_b);
                scale_mode(s, mode, std::sqrt(cas.eta_tilde), 0.5 * (1.0 - cas.eta_tilde));
                scale_mode(s, mode, std::sqrt(cas.gain), 0.5 * (cas.gain - 1.0));
            }
        },
        ch);
    return s.reordered(state.ordering);
}

FockOperator apply_fock(const BosonicChannel& ch, const FockOperator& rho, int mode,
                        double trace_tol) {
    validate(ch);
    double in_trace = rho.trace();
    FockOperator out = std::visit(
        [&](auto&& c) -> FockOperator {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, PureLoss>) {
                return apply_loss_fock(rho, mode, c.eta);
            } else if constexpr (std::is_same_v<T, Qla>) {
                return apply_qla_fock(rho, mode, c.gain);
            } else {
                auto cas = decompose_thermal_loss(c.eta, c.n_b);
                FockOperator mid = apply_loss_fock(rho, mode, cas.eta_tilde);
                return apply_qla_fock(mid, mode, cas.gain);
            }
        },
        ch);
    if (std::abs(out.trace() - in_trace) > trace_tol * std::max(1.0, std::abs(in_trace)))
        throw CutoffOverflow();
    return out;
}

int cutoff_for(const BosonicChannel& ch, double input_mean_photons, double tail_tol) {
    validate(ch);
    if (input_mean_photons < 0.0) throw NegativeEnergy();
    double out_mean = std::visit(
        [&](auto&& c) -> double {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, PureLoss>) {
                return c.eta * input_mean_photons;
            } else if constexpr (std::is_same_v<T, Qla>) {
                return c.gain * input_mean_photons + (c.gain - 1.0);
            } else {
                return c.eta * input_mean_photons + (1.0 - c.eta) * c.n_b;
            }
        },
        ch);
    return cutoff_for_tail(out_mean, tail_tol) + static_cast<int>(std::ceil(input_mean_photons)) + 2;
}

}  // namespace qilab
