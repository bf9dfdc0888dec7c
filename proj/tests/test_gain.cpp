#include <doctest.h>

#include <cmath>

#include "qilab/gain.hpp"

using namespace qilab;

TEST_CASE("nds_output_fidelity") {
    std::vector<double> p2{0.0, 0.0, 1.0};
    double nu = amplifier_nu(1.5, 2.0);
    CHECK(nds_output_fidelity(p2, 1, 1.5, 2.0) == doctest::Approx(std::pow(nu, 3)).epsilon(1e-14));
    CHECK(nds_output_fidelity(p2, 1, 1.5, 2.0) == doctest::Approx(0.92877).epsilon(1e-3));
    CHECK(nds_output_fidelity(p2, 1, 1.7, 1.7) == doctest::Approx(1.0).epsilon(1e-14));
    std::vector<double> vac{1.0};
    CHECK(nds_output_fidelity(vac, 3, 1.5, 2.0) == doctest::Approx(std::pow(nu, 3)).epsilon(1e-14));
}

TEST_CASE("qfi closed forms") {
    QfiNds q = qfi_nds(6.0, 9.0, 2.0);
    CHECK(q.k_tau == doctest::Approx(60.0).epsilon(1e-15));
    CHECK(q.k_g == doctest::Approx(7.5).epsilon(1e-15));
    // N and M interchangeable
    QfiNds swapped = qfi_nds(9.0, 6.0, 2.0);
    CHECK(swapped.k_tau == q.k_tau);
    CHECK(swapped.k_g == q.k_g);
    CHECK_THROWS_AS(qfi_nds(6.0, 9.0, 1.0), GainAtUnity);

    CHECK(qfi_coherent(6.0, 9.0, 2.0) == doctest::Approx(5.5).epsilon(1e-15));
    // photon-term ratio (2G-1)/(G-1) is at least 2 for every G > 1
    for (double g : {1.01, 1.5, 2.0, 10.0}) {
        double photon_nds = 1.0 / (g * (g - 1.0));
        double photon_coh = 1.0 / (g * (2.0 * g - 1.0));
        CHECK(photon_nds / photon_coh ==
              doctest::Approx((2.0 * g - 1.0) / (g - 1.0)).epsilon(1e-12));
        CHECK(photon_nds / photon_coh >= 2.0);
    }
}

TEST_CASE("homodyne / heterodyne Fisher information") {
    HomHetFi hh = fi_homodyne_heterodyne(4.0, 2.0, 1.0);
    CHECK(hh.j_hom == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(hh.j_het == doctest::Approx(4.0).epsilon(1e-15));
    for (double g : {1.5, 2.0, 3.0}) {
        HomHetFi f = fi_homodyne_heterodyne(60.0, 9.0, g);
        double k = qfi_coherent(60.0, 9.0, g);
        CHECK(f.j_hom <= k);
        CHECK(f.j_het <= k);
    }
    CHECK(fi_homodyne_heterodyne(0.0, 2.0, 1.7).j_hom == 0.0);
}

TEST_CASE("photocount estimator") {
    CHECK(estimate_gain(24.0, 6.0, 9.0, 1.0) == doctest::Approx(2.2).epsilon(1e-15));
    double g = 1.9, n = 6.0, m = 9.0, ed = 0.85;
    double y = ed * (g * n + m * (g - 1.0));
    CHECK(estimate_gain(y, n, m, ed) == doctest::Approx(g).epsilon(1e-14));
    CHECK(estimate_gain(0.0, 6.0, 9.0, 1.0) == doctest::Approx(9.0 / 15.0).epsilon(1e-15));
}

TEST_CASE("estimator mean squared error") {
    CHECK(mse_number(6.0, 9.0, 2.0, 1.0) == doctest::Approx(2.0 / 15.0).epsilon(1e-14));
    CHECK(mse_number(6.0, 9.0, 2.0, 1.0) * qfi_nds(6.0, 9.0, 2.0).k_g ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(mse_number(20.0, 20.0, 2.0, 0.7) == doctest::Approx(0.0660714).epsilon(1e-5));
    CHECK(mse_number(6.0, 9.0, 1.0, 1.0) == 0.0);

    CHECK(mse_coherent(6.0, 9.0, 2.0, 1.0) ==
          doctest::Approx(2.0 / 15.0 + 24.0 / 225.0).epsilon(1e-13));
    CHECK(mse_coherent(6.0, 9.0, 2.0, 1.0) - mse_number(6.0, 9.0, 2.0, 1.0) ==
          doctest::Approx(4.0 * 6.0 / 225.0).epsilon(1e-13));
    // photon counting is not QFI-achieving for coherent states
    CHECK(mse_coherent(60.0, 9.0, 2.0, 1.0) > 1.0 / qfi_coherent(60.0, 9.0, 2.0));
    CHECK(mse_coherent(0.0, 9.0, 2.0, 0.9) == doctest::Approx(mse_number(0.0, 9.0, 2.0, 0.9)));
}

TEST_CASE("qfi_coherent_lossy") {
    CHECK(qfi_coherent_lossy(6.0, 9.0, 2.0, 1.0) ==
          doctest::Approx(qfi_coherent(6.0, 9.0, 2.0)).epsilon(1e-14));
    CHECK(qfi_coherent_lossy(6.0, 9.0, 2.0, 0.0) == 0.0);
    double v = 0.7 * 20.0 / (2.0 * 2.4) + 0.7 * 20.0 / (1.0 * 1.7);
    CHECK(qfi_coherent_lossy(20.0, 20.0, 2.0, 0.7) == doctest::Approx(v).epsilon(1e-12));
}

TEST_CASE("qfi_number_lossy") {
    SUBCASE("lossless reduction to the closed form") {
        for (int n : {1, 5, 20}) {
            for (double g : {1.5, 2.0, 3.0}) {
                std::vector<int> per(n, 1);
                double kg = qfi_number_lossy(per, g, 1.0, 240);
                CHECK(std::abs(kg - (2.0 * n) / (g * (g - 1.0))) < 1e-6 * (2.0 * n));
            }
        }
    }
    SUBCASE("vanishes with the detector") {
        CHECK(qfi_number_lossy({1, 1}, 2.0, 0.0, 64) == 0.0);
    }
    SUBCASE("continuous in eta_d") {
        std::vector<int> per(4, 1);
        double k_tau_scale = 4.0 * (4.0 + 4.0);
        for (double ed : {0.3, 0.6, 0.9}) {
            double a = qfi_number_lossy(per, 2.0, ed, 200) * 4.0 * 2.0 * 1.0;
            double b = qfi_number_lossy(per, 2.0, ed + 1e-4, 200) * 4.0 * 2.0 * 1.0;
            CHECK(std::abs(a - b) < 1e-2 * k_tau_scale);
        }
    }
    SUBCASE("cutoff audit") {
        CHECK_THROWS_AS(qfi_number_lossy({8}, 3.0, 0.9, 12), CutoffOverflow);
    }
}

TEST_CASE("threshold_gain") {
    CHECK(threshold_gain(1.0, 20.0, 20.0) == 1.0);
    double g5 = threshold_gain(0.5, 20.0, 20.0);
    double g7 = threshold_gain(0.7, 20.0, 20.0);
    double g9 = threshold_gain(0.9, 20.0, 20.0);
    CHECK(g5 > g7);
    CHECK(g7 > g9);
    CHECK(g9 > 1.0);
    // independence of M
    for (double ed : {0.5, 0.7, 0.9}) {
        double a = threshold_gain(ed, 10.0, 10.0);
        double b = threshold_gain(ed, 20.0, 20.0);
        double c = threshold_gain(ed, 40.0, 40.0);
        CHECK(std::abs(a - b) < 1e-6);
        CHECK(std::abs(b - c) < 1e-6);
    }
    // crossing really is a crossing
    double ed = 0.7, gs = threshold_gain(ed, 20.0, 20.0);
    CHECK(mse_number(20.0, 20.0, gs + 1e-3, ed) < 1.0 / qfi_coherent(20.0, 20.0, gs + 1e-3));
    CHECK(mse_number(20.0, 20.0, gs - 1e-3, ed) > 1.0 / qfi_coherent(20.0, 20.0, gs - 1e-3));
}

TEST_CASE("energy-constrained Bures distances") {
    SUBCASE("coincident gains") {
        BuresResult q = ecb_distance(6.0, 9, 1.7, 1.7);
        CHECK(q.distance == 0.0);
        CHECK(q.fidelity_min == 1.0);
        BuresResult c = cecb_distance(6.0, 9, 1.7, 1.7);
        CHECK(c.distance == 0.0);
        CHECK(c.fidelity_min == 1.0);
    }
    SUBCASE("integer energy collapses the interpolation") {
        double nu = amplifier_nu(1.5, 2.0);
        BuresResult q = ecb_distance(2.0, 1, 1.5, 2.0);
        CHECK(q.fidelity_min == doctest::Approx(std::pow(nu, 3)).epsilon(1e-14));
        CHECK(q.distance == doctest::Approx(std::sqrt(1.0 - std::pow(nu, 3))).epsilon(1e-12));
    }
    SUBCASE("classical never beats quantum and N = 0 coincides") {
        BuresResult q0 = ecb_distance(0.0, 4, 1.3, 2.2);
        BuresResult c0 = cecb_distance(0.0, 4, 1.3, 2.2);
        CHECK(q0.fidelity_min == doctest::Approx(c0.fidelity_min).epsilon(1e-14));
        for (double g : {1.1, 1.8, 3.0})
            for (double gp : {1.2, 2.5, 4.9}) {
                BuresResult q = ecb_distance(6.0, 9, g, gp);
                BuresResult c = cecb_distance(6.0, 9, g, gp);
                CHECK(c.distance <= q.distance * (1.0 + 1e-9) + 1e-15);
            }
    }
    SUBCASE("fidelity_min nonincreasing in N") {
        double prev = 2.0;
        for (double n : {0.0, 1.0, 2.5, 6.0, 20.0}) {
            double f = ecb_distance(n, 9, 1.5, 2.0).fidelity_min;
            CHECK(f <= prev + 1e-15);
            prev = f;
        }
    }
}

TEST_CASE("schmidt_fisher_information equals 4(N + M)") {
    std::vector<double> p1{0.0, 1.0};
    CHECK(schmidt_fisher_information(p1, 1, 2.0, 300) == doctest::Approx(8.0).epsilon(1e-9));
    std::vector<double> vac{1.0};
    CHECK(schmidt_fisher_information(vac, 2, 2.0, 300) == doctest::Approx(8.0).epsilon(1e-9));
    double ns = 0.5;
    std::vector<double> tm;
    for (int k = 0; k < 60; ++k) tm.push_back(std::pow(ns, k) / std::pow(ns + 1.0, k + 1));
    CHECK(schmidt_fisher_information(tm, 1, 2.0, 400) == doctest::Approx(6.0).epsilon(1e-6));
}

TEST_CASE("precision ordering holds") {
    for (double g : {1.2, 1.7, 2.5}) {
        for (double n : {2.0, 10.0}) {
            for (double m : {1.0, 8.0}) {
                double nds = qfi_nds(n, m, g).k_g;
                double coh = qfi_coherent(n, m, g);
                HomHetFi hh = fi_homodyne_heterodyne(n, m, g);
                CHECK(nds >= coh - 1e-12);
                CHECK(coh >= std::max(hh.j_hom, hh.j_het) - 1e-12);
            }
        }
    }
}
