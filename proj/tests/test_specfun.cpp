#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "hyplayer/specfun.hpp"
#include "oracles.hpp"

using namespace hyplayer;

TEST_CASE("gamma_fn classical values") {
    CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
    CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-14));
}

TEST_CASE("gamma_fn against frozen high-precision values") {
    const double x[] = {0.1, 0.37, 3.3, 9.9};
    const double ref[] = {9.5135076986687312858, 2.4035500200786532783, 2.6834373819557683003,
                          289867.70384010963758};
    for (int k = 0; k < 4; ++k) CHECK(std::abs(gamma_fn(x[k]) / ref[k] - 1.0) < 1e-13);
}

TEST_CASE("gamma_fn agrees with std::tgamma on (0, 10]") {
    double worst = 0.0;
    for (double x = 0.01; x <= 10.0; x += 0.0137)
        worst = std::max(worst, std::abs(gamma_fn(x) / std::tgamma(x) - 1.0));
    CHECK(worst < 1e-13);
}

TEST_CASE("gamma_fn rejects nonpositive arguments") {
    CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
    CHECK_THROWS_AS(gamma_fn(-1.5), std::domain_error);
}

TEST_CASE("bessel_k half-integer closed form") {
    for (double x : {1e-6, 1e-3, 0.1, 1.0, 7.5, 30.0, 50.0}) {
        double exact = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x);
        CHECK(std::abs(bessel_k(BesselOrder(0.5), x) / exact - 1.0) < 1e-12);
    }
}

TEST_CASE("bessel_k against frozen high-precision values") {
    struct Row { double nu, x, k; };
    const Row rows[] = {{0.25, 1e-6, 68.107227889734947273}, {0.75, 0.1, 5.5967025112681315542},
                        {1.25, 1.0, 0.73114518792021139091}, {0.3, 2.5, 0.063313879296295559452},
                        {1.9, 7.0, 0.00054039669261203292043}, {0.0, 0.5, 0.92441907122766586178},
                        {1.5, 50.0, 3.4869924973662161283e-23}, {1.0, 1e-3, 999.99623815608555346}};
    for (const Row& r : rows) CHECK(std::abs(bessel_k(BesselOrder(r.nu), r.x) / r.k - 1.0) < 1e-10);
}

TEST_CASE("bessel_k against the integral representation") {
    double worst = 0.0;
    for (double nu : {0.0, 0.2, 0.6, 1.0, 1.4, 1.75, 2.0})
        for (double x : {0.05, 0.3, 1.0, 2.0, 4.0, 11.0, 25.0}) {
            double ref = oracle::bessel_k_quadrature(nu, x);
            worst = std::max(worst, std::abs(bessel_k(BesselOrder(nu), x) / ref - 1.0));
        }
    CHECK(worst < 1e-10);
}

TEST_CASE("bessel_k agrees with the standard library over [1e-6, 50] x [0, 2]") {
    double worst = 0.0;
    for (double nu = 0.0; nu <= 2.0; nu += 0.125)
        for (double lx = -6.0; lx <= std::log10(50.0); lx += 0.07) {
            double x = std::pow(10.0, lx);
            worst = std::max(worst, std::abs(bessel_k(BesselOrder(nu), x) / std::cyl_bessel_k(nu, x) - 1.0));
        }
    CHECK(worst < 1e-10);
}

TEST_CASE("bessel_k is even in the order") {
    for (double nu : {0.3, 0.9, 1.6})
        for (double x : {0.01, 1.0, 20.0})
            CHECK(bessel_k(BesselOrder(-nu), x) == doctest::Approx(bessel_k(BesselOrder(nu), x)).epsilon(1e-15));
}

TEST_CASE("bessel_k leading asymptotic at x = 30") {
    double lead = std::sqrt(std::numbers::pi / 60.0) * std::exp(-30.0);
    CHECK(std::abs(bessel_k(BesselOrder(0.75), 30.0) / lead - 1.0) < 0.03);
}

TEST_CASE("bessel_k satisfies the modified Bessel equation") {
    for (double nu : {0.25, 0.75, 1.25})
        for (double x : {0.5, 2.0, 8.0}) {
            auto K = [nu](double s) { return bessel_k(BesselOrder(nu), s); };
            double h = 1e-2 * x;
            double z = K(x), zp = oracle::derivative(K, x, h), zpp = oracle::second_derivative(K, x, h);
            double res = x * x * zpp + x * zp - (x * x + nu * nu) * z;
            CHECK(std::abs(res) / ((x * x + nu * nu) * z) < 1e-6);
        }
}

TEST_CASE("bessel_k_pair matches two single evaluations") {
    auto p = bessel_k_pair(BesselOrder(0.7), 1.3);
    CHECK(p.k_nu == doctest::Approx(bessel_k(BesselOrder(0.7), 1.3)).epsilon(1e-14));
    CHECK(p.k_nu1 == doctest::Approx(bessel_k(BesselOrder(1.7), 1.3)).epsilon(1e-13));
}

TEST_CASE("bessel_k domain errors") {
    CHECK_THROWS_AS(bessel_k(BesselOrder(0.5), 0.0), std::domain_error);
    CHECK_THROWS_AS(bessel_k(BesselOrder(0.5), -2.0), std::domain_error);
}

TEST_CASE("phi_gamma normalization and closed form") {
    for (double g : {0.1, 0.5, 0.9}) CHECK(phi_gamma(0.0, g) == 1.0);
    for (double s : {1e-4, 0.2, 1.0, 5.0, 20.0})
        CHECK(phi_gamma(s, 0.5) == doctest::Approx(std::exp(-s)).epsilon(1e-12));
    CHECK(phi_gamma(1e-8, 0.3) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("phi_gamma is strictly decreasing") {
    for (double g : {0.25, 0.5, 0.75}) {
        double prev = phi_gamma(0.0, g);
        for (double s = 0.01; s < 30.0; s += 0.01) {
            double v = phi_gamma(s, g);
            REQUIRE(v < prev);
            prev = v;
        }
    }
}

TEST_CASE("phi_gamma solves the profile equation and its derivative is consistent") {
    for (double g : {0.25, 0.75})
        for (double s : {0.3, 1.0, 4.0}) {
            auto f = [g](double x) { return phi_gamma(x, g); };
            double h = 1e-3;
            double a = 1.0 - 2.0 * g;
            double res = oracle::second_derivative(f, s, h) + a / s * oracle::derivative(f, s, h) - f(s);
            CHECK(std::abs(res) < 1e-6);
            CHECK(phi_gamma_prime(s, g) == doctest::Approx(oracle::derivative(f, s, h)).epsilon(1e-8));
        }
}
