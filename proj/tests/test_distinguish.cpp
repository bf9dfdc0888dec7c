#include <doctest.h>

#include <random>

#include "qilab/channels.hpp"
#include "qilab/covert.hpp"
#include "qilab/distinguish.hpp"
#include "qilab/fock.hpp"
#include "qilab/gain.hpp"

using namespace qilab;

namespace {

struct PairCase {
    GaussianState ga, gb;
    FockOperator fa, fb;
};

// Random thermal / coherent / displaced-thermal single-mode pair with
// mean photons <= 2 and Fock cutoff sized for tail < 1e-10.
PairCase random_pair(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> kind(0, 2);
    auto draw = [&](int k) -> std::pair<GaussianState, std::function<FockOperator(int)>> {
        if (k == 0) {
            double n = 2.0 * u(rng);
            return {make_thermal(n), [n](int d) { return fock_thermal(n, d); }};
        }
        if (k == 1) {
            double r = std::sqrt(2.0 * u(rng));
            double phi = 2.0 * M_PI * u(rng);
            std::complex<double> a = std::polar(r, phi);
            return {make_coherent(a), [a](int d) { return fock_coherent(a, d); }};
        }
        double nth = u(rng);
        double r = std::sqrt(u(rng));
        double phi = 2.0 * M_PI * u(rng);
        std::complex<double> a = std::polar(r, phi);
        return {make_displaced_thermal(a, nth),
                [a, nth](int d) { return fock_displaced_thermal(a, nth, d); }};
    };
    auto [ga, fa] = draw(kind(rng));
    auto [gb, fb] = draw(kind(rng));
    int dim = cutoff_for_tail(2.0, 1e-10) + 25;
    return {ga, gb, fa(dim), fb(dim)};
}

}  // namespace

TEST_CASE("fidelity_gaussian closed cases") {
    GaussianState t = make_thermal(0.8);
    CHECK(fidelity_gaussian(t, t) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fidelity_gaussian(make_vacuum(), make_thermal(1.0)) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    // coherent overlap |<a|b>| = exp(-|a-b|^2/2)
    GaussianState a = make_coherent({0.4, 0.1});
    GaussianState b = make_coherent({-0.2, 0.9});
    double want = std::exp(-0.5 * (std::norm(std::complex<double>(0.6, -0.8))));
    CHECK(fidelity_gaussian(a, b) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("fidelity of the amplifier pair matches the Fock pipeline") {
    // Coherent sqrt(N_m) through QLAs of gain 1.5 and 2 (N_m = 1).
    double g0 = 1.5, g1 = 2.0;
    GaussianState ga = apply_gaussian(Qla{g0}, make_coherent({1.0, 0.0}), 0);
    GaussianState gb = apply_gaussian(Qla{g1}, make_coherent({1.0, 0.0}), 0);
    int dim = cutoff_for(Qla{2.0}, 1.0, 1e-12) + 30;
    FockOperator fa = apply_fock(Qla{g0}, fock_coherent({1.0, 0.0}, dim), 0, 1e-10);
    FockOperator fb = apply_fock(Qla{g1}, fock_coherent({1.0, 0.0}, dim), 0, 1e-10);
    CHECK(fidelity_gaussian(ga, gb) == doctest::Approx(fidelity_fock(fa, fb)).epsilon(1e-7));
}

TEST_CASE("s_overlap_gaussian closed cases") {
    GaussianState t = make_thermal(0.7);
    for (double s : {0.1, 0.5, 0.9})
        CHECK(s_overlap_gaussian(t, t, s) == doctest::Approx(1.0).epsilon(1e-12));

    GaussianState a = make_thermal(0.2), b = make_thermal(0.5);
    FockOperator af = fock_thermal(0.2, 60), bf = fock_thermal(0.5, 60);
    CHECK(s_overlap_gaussian(a, b, 0.5) ==
          doctest::Approx(s_overlap_fock(af, bf, 0.5)).epsilon(1e-9));
}

TEST_CASE("two-mode TMSV-return s-overlap matches the Fock construction") {
    double eta = 0.01, nb = 0.2, ns = 0.2;
    auto [g0, g1] = tmsv_return_pair(eta, nb, ns);

    // Fock pipeline: TMSV, thermal-loss on the signal mode, same ordering (R, I).
    int dim = 30;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim * dim);
    for (int n = 0; n < dim; ++n)
        psi(n * dim + n) = std::sqrt(std::pow(ns, n) / std::pow(ns + 1.0, n + 1));
    FockOperator tmsv({dim, dim}, psi * psi.adjoint());
    FockOperator rho1 = apply_fock(ThermalLoss{eta, nb}, tmsv, 0, 1e-8);
    FockOperator idler = partial_trace(tmsv, 0);
    FockOperator rho0 = tensor(fock_thermal(nb, dim), idler);

    double cf = s_overlap_fock(rho0, rho1, 0.5);
    double cg = s_overlap_gaussian(g0, g1, 0.5);
    CHECK(cg == doctest::Approx(cf).epsilon(1e-6));

    double ff = fidelity_fock(rho0, rho1);
    double fg = fidelity_gaussian(g0, g1);
    CHECK(fg == doctest::Approx(ff).epsilon(1e-6));
}

TEST_CASE("oracle equivalence on randomized single-mode pairs") {
    std::mt19937 rng(101);
    for (int i = 0; i < 60; ++i) {
        PairCase pc = random_pair(rng);
        double fg = fidelity_gaussian(pc.ga, pc.gb);
        double ff = fidelity_fock(pc.fa, pc.fb);
        CHECK(std::abs(fg - ff) < 1e-6);
        double cg = s_overlap_gaussian(pc.ga, pc.gb, 0.5);
        double cf = s_overlap_fock(pc.fa, pc.fb, 0.5);
        CHECK(std::abs(cg - cf) < 1e-6);
    }
}

TEST_CASE("chernoff behavior") {
    SUBCASE("identical states") {
        GaussianState t = make_thermal(0.4);
        OverlapResult r = chernoff(t, t);
        CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(r.exponent == doctest::Approx(0.0).epsilon(1e-9));
    }
    SUBCASE("coherent-probe illumination closed form") {
        for (double ns : {0.01, 0.1}) {
            for (double nb : {0.2, 1.0, 20.0}) {
                double kappa = 0.01;
                GaussianState h0 = make_thermal(nb);
                GaussianState h1 = make_displaced_thermal(std::sqrt(kappa * ns), nb);
                OverlapResult r = chernoff(h0, h1);
                double want = kappa * ns *
                              std::pow(std::sqrt(nb + 1.0) - std::sqrt(nb), 2);
                CHECK(r.exponent == doctest::Approx(want).epsilon(1e-8));
            }
        }
    }
    SUBCASE("pure-vs-mixed infimum sits at s -> 0") {
        GaussianState v = make_vacuum();
        GaussianState t = make_thermal(1.0);
        OverlapResult r = chernoff(v, t);
        CHECK(r.s_star <= 1e-3);
        double f = fidelity_gaussian(v, t);
        CHECK(r.value == doctest::Approx(f * f).epsilon(1e-6));
    }
    SUBCASE("chernoff never exceeds bhattacharyya") {
        std::mt19937 rng(55);
        for (int i = 0; i < 30; ++i) {
            PairCase pc = random_pair(rng);
            OverlapResult c = chernoff(pc.ga, pc.gb);
            OverlapResult b = bhattacharyya(pc.ga, pc.gb);
            CHECK(c.value <= b.value + 1e-12);
        }
    }
}

TEST_CASE("bhattacharyya symmetry") {
    GaussianState a = make_thermal(0.2), b = make_thermal(0.5);
    CHECK(bhattacharyya(a, b).value == doctest::Approx(bhattacharyya(b, a).value).epsilon(1e-12));
}

TEST_CASE("monotone sandwich: fvg lower <= Helstrom <= half Chernoff") {
    std::mt19937 rng(404);
    for (int i = 0; i < 25; ++i) {
        PairCase pc = random_pair(rng);
        double f = fidelity_fock(pc.fa, pc.fb);
        double he = helstrom_error(pc.fa, pc.fb);
        OverlapResult c = chernoff(pc.ga, pc.gb);
        auto [lo, hi] = fvg_bounds(f);
        CHECK(lo <= he + 1e-6);  // equality holds for pure pairs; slack covers truncation
        CHECK(he <= 0.5 * c.value + 1e-7);
        CHECK(he <= hi + 1e-9);
    }
}

TEST_CASE("fvg_bounds endpoints") {
    auto [l1, u1] = fvg_bounds(1.0);
    CHECK(l1 == doctest::Approx(0.5));
    CHECK(u1 == doctest::Approx(0.5));
    auto [l0, u0] = fvg_bounds(0.0);
    CHECK(l0 == 0.0);
    CHECK(u0 == 0.0);
    auto [lm, um] = fvg_bounds(0.70711);
    CHECK(lm == doctest::Approx(0.14645).epsilon(1e-4));
    CHECK(um == doctest::Approx(0.35355).epsilon(1e-4));
    CHECK_THROWS_AS(fvg_bounds(1.5), OutOfRange);
}

TEST_CASE("qfi_from_fidelity") {
    SUBCASE("quadratic model") {
        auto f = [](double t) { return 1.0 - t * t / 8.0; };
        CHECK(qfi_from_fidelity(f, 0.0, 1e-3) == doctest::Approx(1.0).epsilon(1e-8));
    }
    SUBCASE("NDS amplifier family gives 4(N + M)") {
        // PMF with mean 1.4 over two modes
        std::vector<double> pmf{0.2, 0.3, 0.4, 0.1};
        double n = 0.3 + 0.8 + 0.3;
        int m = 2;
        double tau = tau_of_gain(1.7);
        auto f = [&](double tp) {
            double nu = 1.0 / std::cosh(tp - tau);
            double acc = 0.0, pw = std::pow(nu, m);
            for (double p : pmf) {
                acc += p * pw;
                pw *= nu;
            }
            return acc;
        };
        CHECK(qfi_from_fidelity(f, tau, 1e-3) ==
              doctest::Approx(4.0 * (n + m)).epsilon(1e-4));
    }
    SUBCASE("coherent amplifier family at G = 2, N = 6, M = 9") {
        double g = 2.0, n = 6.0, m = 9.0;
        double nm = n / m;
        auto f = [&](double gp) {
            GaussianState a = apply_gaussian(Qla{g}, make_coherent(std::sqrt(nm)), 0);
            GaussianState b = apply_gaussian(Qla{gp}, make_coherent(std::sqrt(nm)), 0);
            return std::pow(fidelity_gaussian(a, b), m);
        };
        CHECK(qfi_from_fidelity(f, g, 1e-4) == doctest::Approx(5.5).epsilon(1e-4));
    }
    SUBCASE("noisy derivative raises") {
        std::mt19937 rng(8);
        std::uniform_real_distribution<double> u(-1e-5, 1e-5);
        auto f = [&](double t) { return 1.0 - t * t / 8.0 + u(rng); };
        CHECK_THROWS_AS(qfi_from_fidelity(f, 0.0, 1e-5), NoisyDerivative);
    }
}
