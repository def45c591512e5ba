#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "hyplayer/extension.hpp"
#include "hyplayer/specfun.hpp"
#include "oracles.hpp"

using namespace hyplayer;

namespace {

std::shared_ptr<const GridTY> make_grid(double T, double R, int Nt, int Ny, double q) {
    return std::make_shared<const GridTY>(build_grid(T, R, Nt, Ny, q));
}

// Flat strip, Dirichlet everywhere, data from the pure mode cos(lambda t) phi_gamma(lambda y).
ExtensionProblem pure_mode_problem(std::shared_ptr<const GridTY> g, double gamma, double lambda) {
    ExtensionProblem p;
    p.grid = std::move(g);
    p.gamma = gamma;
    p.warp_power = 0.0;
    p.bc.bottom_reaction = false;
    p.bc.value = [gamma, lambda](double t, double y) {
        return std::cos(lambda * t) * phi_gamma(lambda * y, gamma);
    };
    return p;
}

Field2D sample(std::shared_ptr<const GridTY> g, const std::function<double(double, double)>& fn) {
    Field2D u(g);
    for (int i = 0; i <= g->Nt; ++i)
        for (int j = 0; j <= g->Ny; ++j) u(i, j) = fn(g->t[i], g->y[j]);
    return u;
}

struct ModeError {
    double field;
    double dtn;
};

ModeError pure_mode_errors(double gamma, int Nt, int Ny, DtnMethod method = DtnMethod::kFlux) {
    const double lambda = 1.0;
    auto g = make_grid(std::numbers::pi, 8.0, Nt, Ny, default_grading(gamma));
    ExtensionOperator op(pure_mode_problem(g, gamma, lambda));
    SolveResult s = solve_newton(Field2D(g), op);
    Field2D exact = sample(g, op.problem().bc.value);
    ModeError e{0.0, 0.0};
    for (std::size_t k = 0; k < exact.values().size(); ++k)
        e.field = std::max(e.field, std::abs(s.field.values()[k] - exact.values()[k]));
    std::vector<double> dtn = dtn_numeric(s.field, op, method);
    for (int i = Nt / 8; i <= 7 * Nt / 8; ++i)
        e.dtn = std::max(e.dtn, std::abs(dtn[i] - std::pow(lambda, 2 * gamma) * std::cos(lambda * g->t[i])));
    return e;
}

ExtensionProblem all_neumann_problem(std::shared_ptr<const GridTY> g, double gamma) {
    ExtensionProblem p;
    p.grid = std::move(g);
    p.gamma = gamma;
    p.bc.left = p.bc.right = p.bc.top = Side::kNeumann;
    p.bc.bottom_reaction = true;
    p.potential = std::make_shared<const Potential>(quartic_potential());
    return p;
}

Field2D random_field(std::shared_ptr<const GridTY> g, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    Field2D u(g);
    for (double& v : u.values()) v = U(rng);
    return u;
}

}  // namespace

TEST_CASE("graded nodes") {
    auto y = graded_nodes(10.0, 20, 3.0);
    CHECK(y.front() == 0.0);
    CHECK(y.back() == doctest::Approx(10.0));
    CHECK(y[1] == doctest::Approx(10.0 * std::pow(1.0 / 20, 3)));
    for (std::size_t j = 1; j < y.size(); ++j) CHECK(y[j] > y[j - 1]);
    CHECK(default_grading(0.5) == doctest::Approx(3.0));
    CHECK(default_grading(0.75) == doctest::Approx(2.0));
    CHECK(default_grading(0.99) >= 1.0);
}

TEST_CASE("build_grid shape and validation") {
    GridTY g = build_grid(10.0, 10.0, 400, 120, 3.0);
    CHECK(g.t.front() == -10.0);
    CHECK(g.t.back() == 10.0);
    CHECK(g.ht() == doctest::Approx(0.05));
    CHECK(g.nodes() == 401 * 121);
    CHECK_THROWS(build_grid(10.0, 10.0, 4, 120, 3.0));
    CHECK_THROWS(build_grid(10.0, 10.0, 400, 4, 3.0));
    CHECK_THROWS(build_grid(-1.0, 10.0, 400, 120, 3.0));
    CHECK_THROWS(build_grid(10.0, 10.0, 400, 120, 0.5));
}

TEST_CASE("extend_height keeps the old nodes") {
    GridTY g = build_grid(5.0, 10.0, 50, 40, 3.0);
    GridTY h = extend_height(g, 20.0);
    CHECK(h.R == doctest::Approx(20.0));
    CHECK(h.y.back() == doctest::Approx(20.0));
    for (int j = 0; j <= g.Ny; ++j) CHECK(h.y[j] == g.y[j]);
    CHECK(h.Ny > g.Ny);
}

TEST_CASE("comparison function requires mu > n - 1") {
    CHECK(comparison_v(0.3, 3.0) == doctest::Approx(std::tanh(0.9)));
    CHECK_THROWS_AS(comparison_v(0.3, 2.0), std::domain_error);
    CHECK_THROWS_AS(comparison_v(0.3, 1.0, 3), std::domain_error);
}

TEST_CASE("pure extension mode: solution and DtN converge under refinement") {
    for (double gamma : {0.25, 0.5, 0.75}) {
        ModeError coarse = pure_mode_errors(gamma, 64, 40);
        ModeError fine = pure_mode_errors(gamma, 128, 80);
        CHECK(fine.field < 5e-3);
        CHECK(fine.dtn < 2e-2);
        CHECK(coarse.field / fine.field > 2.5);
        CHECK(coarse.dtn / fine.dtn > 2.0);
    }
}

TEST_CASE("fit and flux DtN agree on the pure mode") {
    for (double gamma : {0.25, 0.5, 0.75}) {
        ModeError fit = pure_mode_errors(gamma, 128, 80, DtnMethod::kFit);
        ModeError flux = pure_mode_errors(gamma, 128, 80, DtnMethod::kFlux);
        CHECK(fit.dtn < 2e-3);
        CHECK(flux.dtn <= 1.01 * fit.dtn);
    }
}

TEST_CASE("exact pure mode has a vanishing discrete residual under refinement") {
    double prev = 1e9;
    for (int k : {1, 2, 4}) {
        auto g = make_grid(std::numbers::pi, 8.0, 32 * k, 20 * k, 3.0);
        ExtensionOperator op(pure_mode_problem(g, 0.5, 1.0));
        double r = op.residual_norm(sample(g, op.problem().bc.value));
        CHECK(r < prev);
        prev = r;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("the constant well state has zero residual") {
    auto g = make_grid(5.0, 5.0, 40, 20, 3.0);
    ExtensionProblem p = all_neumann_problem(g, 0.5);
    p.bc.left = Side::kDirichlet;
    p.bc.value = [](double, double) { return 1.0; };
    ExtensionOperator op(p);
    CHECK(op.residual_norm(Field2D(g, 1.0)) == 0.0);
    CHECK(energy(Field2D(g, 1.0), op) == 0.0);
}

TEST_CASE("fluxes telescope: total inflow vanishes with closed sides") {
    auto g = make_grid(3.0, 4.0, 20, 16, 2.0);
    ExtensionOperator op(all_neumann_problem(g, 0.3));
    Field2D u = random_field(g, 7);
    double total = 0.0, scale = 0.0;
    for (int i = 0; i <= g->Nt; ++i)
        for (int j = 0; j <= g->Ny; ++j) {
            double f = op.inflow(u, i, j);
            total += f;
            scale += std::abs(f);
        }
    CHECK(std::abs(total) < 1e-12 * scale);
}

TEST_CASE("residual is minus the energy gradient") {
    ModelParams mp(3, 0.4, 3.0, quartic_potential());
    auto g = make_grid(2.0, 3.0, 10, 10, default_grading(0.4));
    ExtensionOperator op(layer_problem(mp, g));
    Field2D u = op.with_boundary_values(random_field(g, 11));
    Field2D r = op.residual(u);
    const double eps = 1e-6;
    double worst = 0.0;
    for (int i = 0; i <= g->Nt; ++i)
        for (int j = 0; j <= g->Ny; ++j) {
            if (!op.is_unknown(i, j)) continue;
            Field2D up = u, um = u;
            up(i, j) += eps;
            um(i, j) -= eps;
            double grad = (energy(up, op) - energy(um, op)) / (2 * eps);
            double ref = -r(i, j) * op.row_scale(i, j);
            worst = std::max(worst, std::abs(grad - ref) / (std::abs(ref) + 1e-3 * op.row_scale(i, j)));
        }
    CHECK(worst < 1e-6);
}

TEST_CASE("energy Hessian is symmetric and matches differences of the residual") {
    ModelParams mp(3, 0.6, 3.0, quartic_potential());
    auto g = make_grid(2.0, 3.0, 8, 8, default_grading(0.6));
    ExtensionOperator op(layer_problem(mp, g));
    Field2D u = op.with_boundary_values(random_field(g, 3));
    Eigen::MatrixXd H(energy_hessian(u, op));
    CHECK((H - H.transpose()).norm() <= 1e-12 * H.norm());
    const double eps = 1e-6;
    double worst = 0.0;
    for (int i = 0; i <= g->Nt; ++i)
        for (int j = 0; j <= g->Ny; ++j) {
            int k = op.unknown_index(i, j);
            if (k < 0) continue;
            Field2D up = u, um = u;
            up(i, j) += eps;
            um(i, j) -= eps;
            Field2D rp = op.residual(up), rm = op.residual(um);
            for (int a = 0; a <= g->Nt; ++a)
                for (int b = 0; b <= g->Ny; ++b) {
                    int l = op.unknown_index(a, b);
                    if (l < 0) continue;
                    double col = -(rp(a, b) - rm(a, b)) * op.row_scale(a, b) / (2 * eps);
                    worst = std::max(worst, std::abs(col - H(l, k)) / (1.0 + std::abs(H(l, k))));
                }
        }
    CHECK(worst < 1e-5);
}

TEST_CASE("energy of tanh(mu t) matches a one-dimensional quadrature") {
    const double T = 5.0, R = 2.0, mu = 3.0;
    for (double gamma : {0.25, 0.5, 0.75}) {
        ModelParams mp(3, gamma, mu, quartic_potential());
        auto g = make_grid(T, R, 20000, 8, default_grading(gamma));
        ExtensionOperator op(layer_problem(mp, g));
        Field2D v = sample(g, [mu](double t, double) { return std::tanh(mu * t); });
        auto parts = op.energy_parts(v);
        const double a = 1.0 - 2.0 * gamma;
        const double ymass = std::pow(R, 1.0 + a) / (1.0 + a);
        auto grad = [mu](double t) {
            double s = 1.0 / std::cosh(mu * t);
            return std::pow(std::cosh(t), 2) * mu * mu * std::pow(s, 4);
        };
        auto pot = [mu](double t) {
            double m = 1.0 - std::pow(std::tanh(mu * t), 2);
            return std::pow(std::cosh(t), 2) * 0.25 * m * m;
        };
        double g_ref = 0.5 * ymass * oracle::simpson(grad, -T, T, 200000);
        double p_ref = oracle::simpson(pot, -T, T, 200000) / d_gamma(gamma);
        CHECK(std::abs(parts.gradient / g_ref - 1.0) < 1e-6);
        CHECK(std::abs(parts.potential / p_ref - 1.0) < 1e-6);
    }
}

TEST_CASE("Newton solve of the layer problem converges and respects the maximum principle") {
    ModelParams mp(3, 0.5, 3.0, quartic_potential());
    auto g = make_grid(6.0, 6.0, 120, 40, 3.0);
    ExtensionOperator op(layer_problem(mp, g));
    Field2D u0 = sample(g, [](double t, double) { return std::tanh(3.0 * t); });
    SolveResult s = solve_newton(u0, op);
    CHECK(s.report.converged);
    CHECK(s.report.residual_history.back() <= 1e-10);
    CHECK(s.field.max_abs() <= 1.0 + 1e-9);
    CHECK(s.report.final_energy <= energy(u0, op));
    CHECK(s.report.final_energy == doctest::Approx(energy(s.field, op)));
}

TEST_CASE("non-convergence raises SolveFailure with the partial report") {
    ModelParams mp(3, 0.5, 3.0, quartic_potential());
    auto g = make_grid(6.0, 6.0, 60, 20, 3.0);
    ExtensionOperator op(layer_problem(mp, g));
    SolverConfig cfg;
    cfg.max_iters = 1;
    try {
        solve_newton(Field2D(g, 0.0), op, cfg);
        FAIL("expected SolveFailure");
    } catch (const SolveFailure& e) {
        CHECK_FALSE(e.report().converged);
        CHECK_FALSE(e.report().residual_history.empty());
    }
}

TEST_CASE("field export round trip") {
    auto g = make_grid(2.0, 3.0, 12, 9, 2.5);
    Field2D u = random_field(g, 5);
    auto dir = std::filesystem::temp_directory_path() / "hyplayer_field_test";
    std::filesystem::create_directories(dir);
    write_field_binary(u, (dir / "f.bin").string());
    Field2D back = read_field_binary((dir / "f.bin").string());
    CHECK(back.grid().Nt == 12);
    CHECK(back.grid().Ny == 9);
    CHECK(back.values() == u.values());
    CHECK(back.grid().y == g->y);
    write_field_csv(u, (dir / "f.csv").string());
    std::ifstream in(dir / "f.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,y,u");
    int rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == g->nodes());
    std::filesystem::remove_all(dir);
}

TEST_CASE("radial solve reproduces the spectral multiplier") {
    SpectralCheckConfig cfg;
    cfg.N = 100;
    cfg.solve.Ny = 60;
    SpectralCheck coarse = spectral_check(0.5, cfg);
    cfg.N = 200;
    cfg.solve.Ny = 120;
    SpectralCheck fine = spectral_check(0.5, cfg);
    CHECK(fine.rel_l2 < 0.02);
    CHECK(coarse.rel_l2 / fine.rel_l2 > 2.0);
}
