#include <doctest.h>

#include <random>

#include "qilab/gaussian.hpp"

using namespace qilab;

TEST_CASE("symplectic form definition and orthogonality") {
    Eigen::MatrixXd o1 = symplectic_form(1);
    CHECK(o1(0, 1) == 1.0);
    CHECK(o1(1, 0) == -1.0);

    Eigen::MatrixXd o2 = symplectic_form(2);
    CHECK((o2.block(0, 2, 2, 2) - Eigen::Matrix2d::Identity()).norm() == 0.0);
    CHECK((o2.block(2, 0, 2, 2) + Eigen::Matrix2d::Identity()).norm() == 0.0);

    Eigen::MatrixXd o3 = symplectic_form(3);
    CHECK((o3 * o3.transpose() - Eigen::MatrixXd::Identity(6, 6)).norm() < 1e-15);
    CHECK((o3 * o3 + Eigen::MatrixXd::Identity(6, 6)).norm() < 1e-15);
    CHECK((o3 + o3.transpose()).norm() == 0.0);
}

TEST_CASE("symplectic eigenvalues of standard states") {
    CHECK(symplectic_eigenvalues(make_vacuum())[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(symplectic_eigenvalues(make_thermal(1.0))[0] == doctest::Approx(1.5).epsilon(1e-12));
    auto nus = symplectic_eigenvalues(make_tmsv(0.3));
    CHECK(nus.size() == 2);
    CHECK(nus[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(nus[1] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("non-physical covariance is rejected") {
    Eigen::MatrixXd v = 0.2 * Eigen::Matrix2d::Identity();  // below vacuum
    GaussianState bad(1, Eigen::VectorXd::Zero(2), v);
    CHECK_THROWS_AS(symplectic_eigenvalues(bad), NonPositiveDefinite);
}

TEST_CASE("two-mode standard decomposition") {
    SUBCASE("uncorrelated symmetric") {
        TwoModeDecomposition d = two_mode_standard_decomposition({0.8, 0.8, 0.0});
        CHECK(d.nu_plus == doctest::Approx(0.8).epsilon(1e-14));
        CHECK(d.nu_minus == doctest::Approx(0.8).epsilon(1e-14));
        CHECK((d.symplectic - Eigen::Matrix4d::Identity()).norm() < 1e-12);
    }
    SUBCASE("tmsv purity") {
        double ns = 1.0, s = ns + 0.5, c = std::sqrt(ns * (ns + 1.0));
        TwoModeDecomposition d = two_mode_standard_decomposition({s, s, c});
        CHECK(d.nu_plus == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(d.nu_minus == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("degenerate form is an error") {
        // (a + b)^2 == 4 c^2
        CHECK_THROWS_AS(two_mode_standard_decomposition({1.0, 1.0, 1.0}), DegenerateForm);
    }
    SUBCASE("random bona fide triples reconstruct") {
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> ab(0.5, 4.0), frac(0.0, 0.95);
        int accepted = 0;
        while (accepted < 1000) {
            double a = ab(rng), b = ab(rng);
            // c below both the decomposition and uncertainty limits
            double cmax = std::min(std::sqrt((a - 0.5) * (b + 0.5)),
                                   std::sqrt((a + 0.5) * (b - 0.5)));
            double c = frac(rng) * cmax;
            TwoModeStandardForm f{a, b, c};
            Eigen::Matrix4d v = assemble_standard_form(f);
            GaussianState st(2, Eigen::VectorXd::Zero(4), v, Ordering::XPXP);
            auto nus = symplectic_eigenvalues(st);
            TwoModeDecomposition d = two_mode_standard_decomposition(f);
            REQUIRE(std::abs(nus[0] - std::max(d.nu_plus, d.nu_minus)) < 1e-10);
            REQUIRE(std::abs(nus[1] - std::min(d.nu_plus, d.nu_minus)) < 1e-10);
            Eigen::Vector4d diag(d.nu_minus, d.nu_minus, d.nu_plus, d.nu_plus);
            Eigen::Matrix4d rebuilt = d.symplectic * diag.asDiagonal() * d.symplectic.transpose();
            REQUIRE((rebuilt - v).cwiseAbs().maxCoeff() < 1e-10);
            ++accepted;
        }
    }
}

TEST_CASE("state constructors") {
    SUBCASE("thermal(0) is vacuum") {
        GaussianState t0 = make_thermal(0.0);
        CHECK((t0.cov - make_vacuum().cov).norm() == 0.0);
    }
    SUBCASE("coherent displacement") {
        GaussianState c = make_coherent({1.0, 0.0});
        CHECK(c.mean(0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
        CHECK(c.mean(1) == 0.0);
        CHECK((c.cov - 0.5 * Eigen::Matrix2d::Identity()).norm() == 0.0);
        CHECK(mean_photons(c, 0) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("tmsv determinant is pure") {
        GaussianState t = make_tmsv(0.5);
        CHECK(t.cov.determinant() == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
        CHECK(mean_photons(t, 0) == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("negative energy rejected") {
        CHECK_THROWS_AS(make_thermal(-0.1), NegativeEnergy);
        CHECK_THROWS_AS(make_tmsv(-1.0), NegativeEnergy);
    }
}

TEST_CASE("ordering conversion is an involution and preserves physics") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.5);
    for (int i = 0; i < 50; ++i) {
        GaussianState t = make_tmsv(u(rng));
        GaussianState twice = t.reordered(Ordering::XPXP).reordered(Ordering::XXPP);
        CHECK((twice.cov - t.cov).norm() == 0.0);
        CHECK((twice.mean - t.mean).norm() == 0.0);
        auto a = symplectic_eigenvalues(t);
        auto b = symplectic_eigenvalues(t.reordered(Ordering::XPXP));
        CHECK(a[0] == doctest::Approx(b[0]).epsilon(1e-12));
        CHECK(a[1] == doctest::Approx(b[1]).epsilon(1e-12));
    }
}

TEST_CASE("constructed states satisfy the uncertainty relation") {
    for (double n : {0.0, 0.3, 2.0, 17.0}) CHECK(check_bona_fide(make_thermal(n)));
    for (double ns : {0.0, 0.01, 1.0, 8.0}) CHECK(check_bona_fide(make_tmsv(ns)));
    CHECK(check_bona_fide(make_coherent({0.3, -1.2})));
    CHECK(check_bona_fide(make_displaced_thermal({1.0, 2.0}, 0.7)));
}
