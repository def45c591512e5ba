#include "hyplayer/layer.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hyplayer {

namespace {

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double m = static_cast<double>(x.size());
    double xb = 0, yb = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        xb += x[k];
        yb += y[k];
    }
    xb /= m;
    yb /= m;
    double sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - xb) * (x[k] - xb);
        sxy += (x[k] - xb) * (y[k] - yb);
    }
    return sxy / sxx;
}

LayerProfile build_profile(const Field2D& u, double T) {
    const GridTY& g = u.grid();
    LayerProfile p;
    p.t = g.t;
    p.trace = u.trace();
    const int n = g.Nt + 1;
    const double h = g.ht();
    p.dw_dt.resize(n);
    for (int i = 1; i + 1 < n; ++i) p.dw_dt[i] = (p.trace[i + 1] - p.trace[i - 1]) / (2 * h);
    p.dw_dt[0] = (p.trace[1] - p.trace[0]) / h;
    p.dw_dt[n - 1] = (p.trace[n - 1] - p.trace[n - 2]) / h;
    p.monotonicity_margin = INFINITY;
    for (int i = 0; i + 1 < n; ++i)
        p.monotonicity_margin = std::min(p.monotonicity_margin, (p.trace[i + 1] - p.trace[i]) / h);

    // tail averages over the outer 5% of [-T, T] on each side
    const double band = 0.1 * T;
    double sp = 0, sm = 0;
    int np = 0, nm = 0;
    for (int i = 0; i < n; ++i) {
        if (p.t[i] >= g.t_hi - band - 1e-12) sp += p.trace[i], ++np;
        if (p.t[i] <= g.t_lo + band + 1e-12) sm += p.trace[i], ++nm;
    }
    p.L_plus = sp / np;
    p.L_minus = sm / nm;
    return p;
}

}  // namespace

std::shared_ptr<const GridTY> layer_grid(const ModelParams& params, const LayerGridConfig& cfg) {
    const double q = cfg.q > 0.0 ? cfg.q : default_grading(params.gamma());
    return std::make_shared<const GridTY>(build_grid(cfg.T, cfg.R, cfg.Nt, cfg.Ny, q));
}

LayerResult compute_layer(const ModelParams& params, const LayerGridConfig& grid_cfg,
                          const SolverConfig& solver_cfg, InitialGuess guess) {
    auto grid = layer_grid(params, grid_cfg);
    ExtensionOperator op(layer_problem(params, grid, grid_cfg.top));
    Field2D init(grid);
    for (int i = 0; i <= grid->Nt; ++i) {
        double t = grid->t[i];
        double v = guess == InitialGuess::kComparison ? comparison_v(t, params.mu(), params.n())
                                                      : std::clamp(0.5 * t, -1.0, 1.0);
        for (int j = 0; j <= grid->Ny; ++j) init(i, j) = v;
    }
    SolveResult sol = solve_newton(init, op, solver_cfg);
    LayerProfile prof = build_profile(sol.field, grid_cfg.T);

    std::ostringstream err;
    if (!(prof.monotonicity_margin > 0.0))
        err << "trace is not strictly increasing in t (margin " << prof.monotonicity_margin
            << "); ";
    if (std::abs(prof.L_plus - 1.0) > grid_cfg.tail_tol ||
        std::abs(prof.L_minus + 1.0) > grid_cfg.tail_tol)
        err << "trace limits miss +-1 (L+ = " << prof.L_plus << ", L- = " << prof.L_minus
            << ", tol " << grid_cfg.tail_tol << "); ";
    if (err.str().empty()) {
        try {
            prof.t0 = find_zero_crossing(prof.t, prof.trace);
        } catch (const std::exception& e) {
            err << "no interior zero crossing: " << e.what() << "; ";
        }
    }
    if (!err.str().empty()) throw LayerDiagnosticError("layer diagnostics failed: " + err.str());
    try {
        DecayRates r = decay_rates(prof.t, prof.trace);
        prof.decay_plus = r.plus;
        prof.decay_minus = r.minus;
    } catch (const std::runtime_error&) {
        prof.decay_plus = prof.decay_minus = NAN;
    }
    return {std::move(prof), std::move(sol.field), std::move(sol.report), std::move(op)};
}

double find_zero_crossing(const std::vector<double>& t, const std::vector<double>& trace) {
    if (t.size() != trace.size() || t.size() < 2)
        throw std::invalid_argument("find_zero_crossing: bad sample arrays");
    // sign changes between consecutive nonzero samples; exact zeros in between are skipped
    int changes = 0;
    double t0 = NAN;
    std::ptrdiff_t prev = -1;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (trace[i] == 0.0) continue;
        if (prev >= 0 && (trace[prev] < 0.0) != (trace[i] < 0.0)) {
            ++changes;
            if (static_cast<std::size_t>(prev) + 1 == i) {
                double a = trace[prev], b = trace[i];
                t0 = t[prev] + (t[i] - t[prev]) * a / (a - b);
            } else {
                t0 = 0.5 * (t[prev + 1] + t[i - 1]);
            }
        }
        prev = static_cast<std::ptrdiff_t>(i);
    }
    if (changes != 1)
        throw std::runtime_error("find_zero_crossing: trace changes sign " +
                                 std::to_string(changes) + " times");
    return t0;
}

DecayRates decay_rates(const std::vector<double>& t, const std::vector<double>& trace,
                       DecayWindow window) {
    std::vector<double> xp, yp, xm, ym;
    for (std::size_t i = 0; i < t.size(); ++i) {
        double at = std::abs(t[i]);
        if (at < window.lo || at > window.hi) continue;
        double tail = t[i] > 0 ? 1.0 - trace[i] : trace[i] + 1.0;
        if (tail < 1e-8 || tail > 1e-2) continue;
        if (t[i] > 0) {
            xp.push_back(t[i]);
            yp.push_back(std::log(tail));
        } else {
            xm.push_back(t[i]);
            ym.push_back(std::log(tail));
        }
    }
    if (xp.size() < 4 || xm.size() < 4)
        throw std::runtime_error(
            "decay_rates: window underflow (tail outside [1e-8, 1e-2]); use a smaller T or "
            "window");
    return {-fit_slope(xp, yp), fit_slope(xm, ym)};
}

NecessaryConditionReport necessary_condition_check(const Potential& potential, double L_plus,
                                                   double L_minus, int samples, double tol) {
    if (samples < 2) throw std::invalid_argument("necessary_condition_check: samples < 2");
    NecessaryConditionReport rep;
    rep.F_plus = potential.F(L_plus);
    rep.F_minus = potential.F(L_minus);
    rep.min_F = INFINITY;
    for (int k = 0; k < samples; ++k)
        rep.min_F = std::min(rep.min_F, potential.F(-1.0 + 2.0 * k / (samples - 1)));
    std::ostringstream d;
    bool ok = true;
    if (rep.min_F < std::max(rep.F_plus, rep.F_minus) - tol) {
        ok = false;
        d << "min F = " << rep.min_F << " < F(L+-) = " << std::max(rep.F_plus, rep.F_minus) << "; ";
    }
    if (std::abs(rep.F_plus - rep.F_minus) > tol) {
        ok = false;
        d << "F(L+) = " << rep.F_plus << " != F(L-) = " << rep.F_minus << "; ";
    }
    rep.passed = ok;
    rep.detail = ok ? "F >= F(L-) = F(L+) on [-1, 1]" : d.str();
    return rep;
}

double stability_smallest_eigenvalue(const Field2D& u, const ExtensionOperator& op) {
    using SpMat = Eigen::SparseMatrix<double>;
    const SpMat H = energy_hessian(u, op);
    const Eigen::VectorXd M = lumped_mass(op);
    const Eigen::Index n = H.rows();
    if (n == 0) throw std::invalid_argument("stability_smallest_eigenvalue: no unknowns");
    SpMat Mdiag(n, n);
    {
        std::vector<Eigen::Triplet<double>> tr;
        tr.reserve(n);
        for (Eigen::Index k = 0; k < n; ++k) tr.emplace_back(k, k, M[k]);
        Mdiag.setFromTriplets(tr.begin(), tr.end());
    }

    // Sylvester inertia: the number of negative pivots of H - sigma M equals the number of
    // generalized eigenvalues below sigma.
    Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt;
    bool analyzed = false;
    auto below = [&](double sigma) {
        SpMat A = H - sigma * Mdiag;
        if (!analyzed) {
            ldlt.analyzePattern(A);
            analyzed = true;
        }
        ldlt.factorize(A);
        if (ldlt.info() != Eigen::Success) return -1;
        return static_cast<int>((ldlt.vectorD().array() <= 0.0).count());
    };

    // upper bound: Rayleigh quotient of a smooth positive vector
    Eigen::VectorXd x(n);
    for (Eigen::Index k = 0; k < n; ++k) x[k] = 1.0 + 0.25 * std::sin(0.7 * static_cast<double>(k));
    double hi = x.dot(H * x) / x.dot(M.cwiseProduct(x));
    const double scale = std::max(1.0, std::abs(hi));
    for (int k = 0; below(hi) == 0; ++k) {
        if (k > 60) throw std::runtime_error("stability_smallest_eigenvalue: no upper bracket");
        hi += scale * std::ldexp(1.0, k);
    }
    double lo = std::min(0.0, hi) - 1e-6 * scale;
    for (int k = 0;; ++k) {
        int c = below(lo);
        if (c == 0) break;
        if (k > 60) throw std::runtime_error("stability_smallest_eigenvalue: no lower bracket");
        lo -= scale * std::ldexp(1.0, k);
    }
    constexpr double kRelTol = 1e-10;
    for (int it = 0; it < 200 && hi - lo > kRelTol * std::max(1e-8, std::abs(lo) + std::abs(hi));
         ++it) {
        double mid = 0.5 * (lo + hi);
        int c = below(mid);
        if (c < 0) throw std::runtime_error("stability_smallest_eigenvalue: factorization failed");
        (c == 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double oddness_defect(const Field2D& u) {
    const GridTY& g = u.grid();
    double d = 0.0;
    for (int i = 0; i <= g.Nt; ++i)
        for (int j = 0; j <= g.Ny; ++j) d = std::max(d, std::abs(u(i, j) + u(g.Nt - i, j)));
    return d;
}

double min_t_increment(const Field2D& u) {
    const GridTY& g = u.grid();
    const double h = g.ht();
    double m = INFINITY;
    for (int i = 0; i < g.Nt; ++i)
        for (int j = 0; j <= g.Ny; ++j) m = std::min(m, (u(i + 1, j) - u(i, j)) / h);
    return m;
}

}  // namespace hyplayer
