#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "hyplayer/local_limit.hpp"

using namespace hyplayer;

namespace {

double euclid_error(int N, OdeScheme scheme) {
    OdeConfig cfg;
    cfg.scheme = scheme;
    OdeProfile p = ode_layer(quartic_potential(), 0.0, 12.0, N, cfg);
    double e = 0.0;
    for (std::size_t i = 0; i < p.t.size(); ++i)
        e = std::max(e, std::abs(p.w[i] - std::tanh(p.t[i] / std::sqrt(2.0))));
    return e;
}

}  // namespace

TEST_CASE("drift-free ODE reproduces tanh(t / sqrt 2)") {
    CHECK(euclid_error(4000, OdeScheme::kCentral4) <= 1e-6);
    OdeProfile p = ode_layer(quartic_potential(), 0.0, 12.0, 4000);
    CHECK(p.max_residual <= 1e-12);
}

TEST_CASE("second-order scheme converges at second order") {
    double e1 = euclid_error(1000, OdeScheme::kCentral2);
    double e2 = euclid_error(2000, OdeScheme::kCentral2);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("drift-free Hamiltonian identity 1/2 w'^2 = F(w)") {
    OdeProfile p = ode_layer(quartic_potential(), 0.0, 12.0, 4000);
    auto r = ode_hamiltonian_check(p, quartic_potential());
    double m = 0.0;
    for (std::size_t i = 0; i < p.t.size(); ++i)
        if (std::abs(p.t[i]) <= 8.0) m = std::max(m, std::abs(r[i]));
    CHECK(m <= 1e-8);
}

TEST_CASE("n = 3 profile: odd, increasing, steeper than the Euclidean layer") {
    ModelParams mp(3, 0.5, 3.0, quartic_potential());
    OdeProfile p = ode_layer(mp, 12.0, 4000);
    CHECK(p.drift == 2.0);
    CHECK(p.max_residual <= 1e-12);
    const int N = 4000;
    CHECK(std::abs(p.w[N / 2]) <= 1e-12);
    double odd = 0.0;
    for (int i = 0; i <= N; ++i) odd = std::max(odd, std::abs(p.w[i] + p.w[N - i]));
    CHECK(odd <= 1e-10);
    for (int i = 0; i < N; ++i) REQUIRE(p.w[i + 1] > p.w[i]);
    CHECK(p.wp[N / 2] > 1.0 / std::sqrt(2.0));
    auto r = ode_hamiltonian_check(p, mp.potential());
    double m = 0.0;
    for (int i = 0; i <= N; ++i)
        if (std::abs(p.t[i]) <= 8.0) m = std::max(m, std::abs(r[i]));
    CHECK(m <= 1e-4);
}

TEST_CASE("ODE argument checks and interpolation") {
    CHECK_THROWS_AS(ode_layer(quartic_potential(), 2.0, 10.0, 100), std::invalid_argument);
    std::vector<double> t = {0, 1, 2}, w = {0, 10, 30};
    CHECK(interpolate(t, w, 0.5) == doctest::Approx(5.0));
    CHECK(interpolate(t, w, 1.5) == doctest::Approx(20.0));
    CHECK(interpolate(t, w, -1.0) == 0.0);
    CHECK(interpolate(t, w, 9.0) == 30.0);
}

TEST_CASE("limit study over a coarse grid tends toward the local layer") {
    ModelParams mp(3, 0.5, 3.0, quartic_potential());
    LayerGridConfig c;
    c.T = 8.0;
    c.R = 8.0;
    c.Nt = 160;
    c.Ny = 48;
    LimitStudy st = gamma_limit_study({0.8, 0.95}, mp, c);
    REQUIRE(st.rows.size() == 2);
    CHECK(st.rows[0].solved);
    CHECK(st.rows[1].solved);
    CHECK(st.rows[1].e < st.rows[0].e);
    CHECK(st.rows[1].m_mismatch[0] < st.rows[0].m_mismatch[0]);
    CHECK(st.L_plus == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(st.L_minus == doctest::Approx(-1.0).epsilon(1e-4));
}
