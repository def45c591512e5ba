#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "hyplayer/kernel.hpp"
#include "oracles.hpp"

using namespace hyplayer;

namespace {

// n = 3 kernel from its definition: -(d/drho) of rho^{-nu} K_nu(rho), divided by sinh rho,
// with the derivative taken numerically on the standard library Bessel function.
double kernel_oracle(double rho, double gamma) {
    const double nu = 0.5 + gamma;
    auto g = [nu](double r) { return std::pow(r, -nu) * std::cyl_bessel_k(nu, r); };
    return -oracle::derivative(g, rho, 1e-3 * rho) / std::sinh(rho);
}

}  // namespace

TEST_CASE("n = 3 kernel matches the differentiated definition") {
    for (double g : {0.25, 0.5, 0.75})
        for (double rho : {0.01, 0.3, 1.0, 4.0, 15.0})
            CHECK(std::abs(kernel_K(rho, 3, g) / kernel_oracle(rho, g) - 1.0) < 1e-8);
}

TEST_CASE("kernel is positive and decreasing") {
    for (double g : {0.25, 0.5, 0.75}) {
        KernelSamples s = sample_kernel(1e-3, 20.0, 2000, 3, g);
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            REQUIRE(s.values[i] > 0.0);
            if (i > 0 && s.rho[i] >= 0.01) REQUIRE(s.values[i] < s.values[i - 1]);
        }
    }
}

TEST_CASE("kernel domain errors") {
    CHECK_THROWS(kernel_K(0.0, 3, 0.5));
    CHECK_THROWS(kernel_K(-1.0, 3, 0.5));
    CHECK_THROWS(kernel_K(1.0, 4, 0.5));
}

TEST_CASE("near-origin slope -(n + 2 gamma)") {
    KernelSamples s = sample_kernel(1e-3, 1e-2, 200, 3, 0.5);
    CHECK(std::abs(fit_asymptotic_slopes(s, {1e-3, 1e-2}).slope + 4.0) < 0.05);
}

TEST_CASE("near-origin slope converges monotonically over nested windows") {
    for (double g : {0.25, 0.5, 0.75}) {
        KernelSamples s = sample_kernel(1e-5, 1.0, 4000, 3, g);
        double target = -(3.0 + 2.0 * g), prev = 1e9;
        for (FitWindow w : {FitWindow{1e-2, 1e-1}, FitWindow{1e-3, 1e-2}, FitWindow{1e-4, 1e-3}}) {
            double err = std::abs(fit_asymptotic_slopes(s, w).slope - target);
            CHECK(err < prev);
            prev = err;
        }
        CHECK(prev < 0.05);
    }
    KernelSamples s = sample_kernel(1e-5, 1.0, 4000, 3, 0.75);
    CHECK(fit_asymptotic_slopes(s, {1e-5, 1e-4}).slope == doctest::Approx(-4.5).epsilon(0.01));
}

TEST_CASE("compensated tail slope approaches -(1 + gamma) as the window moves out") {
    for (double g : {0.25, 0.5, 0.75}) {
        KernelSamples s = sample_kernel(1.0, 100.0, 4000, 3, g);
        double target = -(1.0 + g), prev = 1e9;
        for (FitWindow w : {FitWindow{10, 20}, FitWindow{20, 40}, FitWindow{30, 60}}) {
            double err = std::abs(fit_asymptotic_slopes(s, w, SlopeFit::kCompensated, 2.0).slope - target);
            CHECK(err < prev);
            prev = err;
        }
        CHECK(prev < 0.1);
    }
}

TEST_CASE("line fits of exact inputs") {
    KernelSamples s;
    for (int i = 0; i < 50; ++i) {
        double r = 0.1 + 0.2 * i;
        s.rho.push_back(r);
        s.values.push_back(std::pow(r, -4.0));
    }
    CHECK(fit_asymptotic_slopes(s, {0.1, 10.0}).slope == doctest::Approx(-4.0).epsilon(1e-12));
    for (std::size_t i = 0; i < s.rho.size(); ++i) s.values[i] = std::exp(-2.0 * s.rho[i]);
    CHECK(std::abs(fit_asymptotic_slopes(s, {0.1, 10.0}, SlopeFit::kExponential).slope + 2.0) < 1e-12);
    CHECK(std::abs(fit_asymptotic_slopes(s, {0.1, 10.0}, SlopeFit::kCompensated, 2.0).slope) < 1e-12);
    CHECK_THROWS_AS(fit_asymptotic_slopes(s, {0.1, 0.5}), std::invalid_argument);
}

TEST_CASE("n = 5 kernel keeps the near-origin power law") {
    KernelSamples s = sample_kernel(1e-3, 1e-2, 60, 5, 0.5);
    CHECK(std::abs(fit_asymptotic_slopes(s, {1e-3, 1e-2}).slope + 6.0) < 0.1);
}
