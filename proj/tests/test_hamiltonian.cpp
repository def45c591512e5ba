#include <cmath>

#include "doctest.h"
#include "hyplayer/hamiltonian.hpp"
#include "hyplayer/layer.hpp"

using namespace hyplayer;

TEST_CASE("relative_l2 over a window") {
    std::vector<double> t = {-3, -1, 0, 1, 3};
    std::vector<double> b = {5, 1, 2, 3, 7};
    std::vector<double> a = {100, 1.1, 2.2, 3.3, -50};
    CHECK(relative_l2(t, a, b, 1.5) == doctest::Approx(0.1));
    CHECK(relative_l2(t, b, b, 10.0) == 0.0);
}

TEST_CASE("y-integrals of a y-independent field") {
    const double gamma = 0.3, R = 4.0;
    ModelParams mp(3, gamma, 3.0, quartic_potential());
    auto g = std::make_shared<const GridTY>(build_grid(5.0, R, 2000, 30, default_grading(gamma)));
    Field2D u(g);
    for (int i = 0; i <= g->Nt; ++i)
        for (int j = 0; j <= g->Ny; ++j) u(i, j) = std::tanh(g->t[i]);
    HamiltonianTrace h = hamiltonian_trace(u, mp);
    const double a = 1.0 - 2.0 * gamma, ymass = std::pow(R, 1.0 + a) / (1.0 + a);
    for (int i = 100; i <= 1900; i += 100) {
        double s = 1.0 / std::cosh(g->t[i]);
        CHECK(h.ut_integral[i] == doctest::Approx(ymass * std::pow(s, 4)).epsilon(1e-4));
        CHECK(h.uy_integral[i] == 0.0);
        CHECK(h.Vprime_formula[i] == doctest::Approx(-2.0 * std::tanh(g->t[i]) * h.ut_integral[i]));
    }
}

TEST_CASE("Hamiltonian of a computed layer decays and dissipates") {
    ModelParams mp(3, 0.5, 3.0, quartic_potential());
    LayerGridConfig c;
    c.T = 8.0;
    c.R = 8.0;
    c.Nt = 160;
    c.Ny = 48;
    LayerResult L = compute_layer(mp, c);
    HamiltonianTrace h = hamiltonian_trace(L.field, mp);
    CHECK(std::abs(h.V.front()) <= 1e-3);
    CHECK(std::abs(h.V.back()) <= 1e-3);
    for (std::size_t i = 0; i < h.t.size(); ++i) {
        if (h.t[i] > 0) CHECK(h.Vprime_formula[i] <= 0.0);
        if (h.t[i] < 0) CHECK(h.Vprime_formula[i] >= 0.0);
    }
    // V is even for an odd layer
    for (std::size_t i = 0; i < h.t.size(); ++i) CHECK(h.V[i] == doctest::Approx(h.V[h.t.size() - 1 - i]).epsilon(1e-8));
    CHECK(relative_l2(h.t, h.Vprime_numeric, h.Vprime_formula, 5.0) < 0.05);
    CHECK(hamiltonian_V(L.field, mp) == h.V);
    CHECK(hamiltonian_Vprime(L.field, mp) == h.Vprime_formula);
    CHECK(weighted_identity_residual(L.field, mp) == h.weighted_identity_residual());
}
