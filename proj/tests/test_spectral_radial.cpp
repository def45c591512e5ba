#include <cmath>

#include "doctest.h"
#include "hyplayer/spectral_radial.hpp"

using namespace hyplayer;

namespace {

double rel_l2(const RadialFn& a, const std::vector<double>& b, int skip_ends = 0) {
    double num = 0.0, den = 0.0;
    for (int j = 1; j < a.intervals() - skip_ends; ++j) {
        double w = std::pow(std::sinh(a.rho(j)), 2);
        num += w * std::pow(a.samples[j] - b[j], 2);
        den += w * b[j] * b[j];
    }
    return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("gamma = 1 reproduces -w'' - 2 coth(rho) w' on a bump") {
    const double L = 10.0;
    const int N = 2000;
    auto f = [](double r) { return smooth_bump(r, 3.0); };
    RadialFn w = RadialFn::sample(f, L, N);
    RadialFn out = frac_laplacian_radial_h3(w, 1.0);
    std::vector<double> ref(N + 1, 0.0);
    const double h = 1e-4;
    for (int j = 1; j < N; ++j) {
        double r = w.rho(j);
        double d1 = (f(r + h) - f(r - h)) / (2 * h);
        double d2 = (f(r + h) - 2 * f(r) + f(r - h)) / (h * h);
        ref[j] = -d2 - 2.0 / std::tanh(r) * d1;
    }
    CHECK(rel_l2(out, ref) < 1e-3);
    // at rho = 0 the operator is -3 w''(0)
    double d2 = (f(h) - 2 * f(0.0) + f(-h)) / (h * h);
    CHECK(out.samples[0] == doctest::Approx(-3.0 * d2).epsilon(2e-3));
}

TEST_CASE("semigroup: two half powers give the full operator") {
    RadialFn w = RadialFn::sample([](double r) { return smooth_bump(r, 3.0); }, 12.0, 1200);
    RadialFn half = frac_laplacian_radial_h3(frac_laplacian_radial_h3(w, 0.5), 0.5);
    RadialFn full = frac_laplacian_radial_h3(w, 1.0);
    CHECK(rel_l2(half, full.samples, 50) < 1e-6);
}

TEST_CASE("eigenfunction sin(k rho)/sinh(rho) scales by (k^2 + 1)^gamma") {
    const double L = 20.0;
    const int N = 2000;
    const double k = 3.0 * 3.14159265358979323846 / L;
    auto f = [k](double r) { return r == 0.0 ? k : std::sin(k * r) / std::sinh(r); };
    RadialFn w = RadialFn::sample(f, L, N);
    for (double g : {0.25, 0.5, 0.75}) {
        RadialFn out = frac_laplacian_radial_h3(w, g, 0.0);
        double lam = std::pow(k * k + 1.0, g);
        std::vector<double> ref(N + 1);
        for (int j = 0; j <= N; ++j) ref[j] = lam * w.samples[j];
        CHECK(rel_l2(out, ref) < 1e-3);
    }
}

TEST_CASE("insufficient decay is flagged") {
    RadialFn w = RadialFn::sample([](double r) { return std::exp(-0.1 * r); }, 10.0, 200);
    CHECK(frac_laplacian_radial_h3(w, 0.5).insufficient_decay);
    RadialFn b = RadialFn::sample([](double r) { return smooth_bump(r, 3.0); }, 10.0, 200);
    CHECK_FALSE(frac_laplacian_radial_h3(b, 0.5).insufficient_decay);
}

TEST_CASE("smooth_bump shape") {
    CHECK(smooth_bump(0.0, 3.0) == doctest::Approx(1.0));
    CHECK(smooth_bump(3.0, 3.0) == 0.0);
    CHECK(smooth_bump(5.0, 3.0) == 0.0);
    CHECK(smooth_bump(1.0, 3.0) > smooth_bump(2.0, 3.0));
}
