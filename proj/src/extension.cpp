#include "hyplayer/extension.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace hyplayer {

namespace {

// 8-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 4> kGlNodes = {0.1834346424956498, 0.5255324099163290,
                                            0.7966664774136267, 0.9602898564975363};
constexpr std::array<double, 4> kGlWeights = {0.3626837833783620, 0.3137066458778873,
                                              0.2223810344533745, 0.1012285362903763};

template <class Fn>
double gauss_legendre(Fn&& fn, double lo, double hi) {
    const double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
    double s = 0.0;
    for (std::size_t k = 0; k < kGlNodes.size(); ++k)
        s += kGlWeights[k] * (fn(c - r * kGlNodes[k]) + fn(c + r * kGlNodes[k]));
    return s * r;
}

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

}  // namespace

double comparison_v(double t, double mu, int n) {
    if (!(mu > n - 1)) throw std::domain_error("comparison_v: requires mu > n - 1");
    return std::tanh(mu * t);
}

ExtensionProblem layer_problem(const ModelParams& params, std::shared_ptr<const GridTY> grid,
                               TopCondition top) {
    ExtensionProblem p;
    p.grid = std::move(grid);
    p.gamma = params.gamma();
    p.warp = Warp::kCosh;
    p.warp_power = params.n() - 1;
    p.potential = params.potential_ptr();
    p.bc.top = top == TopCondition::kComparison ? Side::kDirichlet : Side::kNeumann;
    p.bc.bottom_reaction = true;
    const double mu = params.mu();
    const int n = params.n();
    p.bc.value = [mu, n](double t, double) { return comparison_v(t, mu, n); };
    return p;
}

ExtensionOperator::ExtensionOperator(ExtensionProblem problem)
    : problem_(std::move(problem)), d_(d_gamma(problem_.gamma)) {
    if (!problem_.grid) throw std::invalid_argument("ExtensionOperator: missing grid");
    if (problem_.bc.bottom_reaction && !problem_.potential)
        throw std::invalid_argument("ExtensionOperator: reaction requires a potential");
    const GridTY& g = grid();
    const double a = problem_.a();

    cell_t_.resize(g.Nt + 1);
    face_t_.resize(g.Nt);
    for (int i = 0; i <= g.Nt; ++i) {
        double lo = i == 0 ? g.t[0] : 0.5 * (g.t[i - 1] + g.t[i]);
        double hi = i == g.Nt ? g.t[g.Nt] : 0.5 * (g.t[i] + g.t[i + 1]);
        cell_t_[i] = gauss_legendre([this](double t) { return warp_at(t); }, lo, hi);
    }
    for (int i = 0; i < g.Nt; ++i)
        face_t_[i] = warp_at(0.5 * (g.t[i] + g.t[i + 1])) / (g.t[i + 1] - g.t[i]);

    cell_y_.resize(g.Ny + 1);
    face_y_.resize(g.Ny);
    auto primitive = [a](double y) { return std::pow(y, 1.0 + a) / (1.0 + a); };
    for (int j = 0; j <= g.Ny; ++j) {
        double lo = j == 0 ? 0.0 : 0.5 * (g.y[j - 1] + g.y[j]);
        double hi = j == g.Ny ? g.y[g.Ny] : 0.5 * (g.y[j] + g.y[j + 1]);
        cell_y_[j] = primitive(hi) - primitive(lo);
    }
    for (int j = 0; j < g.Ny; ++j)
        face_y_[j] = (1.0 - a) / (std::pow(g.y[j + 1], 1.0 - a) - std::pow(g.y[j], 1.0 - a));

    row_scale_.assign(g.nodes(), 0.0);
    for (int i = 0; i <= g.Nt; ++i) {
        for (int j = 0; j <= g.Ny; ++j) {
            double s = 0.0;
            if (i > 0) s += cond_t(i - 1, j);
            if (i < g.Nt) s += cond_t(i, j);
            if (j > 0) s += cond_y(i, j - 1);
            if (j < g.Ny) s += cond_y(i, j);
            row_scale_[g.index(i, j)] = s;
        }
    }

    const BoundaryData& bc = problem_.bc;
    unknown_.assign(g.nodes(), -1);
    for (int i = 0; i <= g.Nt; ++i) {
        for (int j = 0; j <= g.Ny; ++j) {
            bool fixed = (i == 0 && bc.left == Side::kDirichlet) ||
                         (i == g.Nt && bc.right == Side::kDirichlet) ||
                         (j == g.Ny && bc.top == Side::kDirichlet) ||
                         (j == 0 && !bc.bottom_reaction);
            if (!fixed) unknown_[g.index(i, j)] = n_unknowns_++;
        }
    }
}

double ExtensionOperator::warp_at(double t) const {
    if (problem_.warp_power == 0.0) return 1.0;
    double base = problem_.warp == Warp::kCosh ? std::cosh(t) : std::sinh(std::abs(t));
    return std::pow(base, problem_.warp_power);
}

double ExtensionOperator::inflow(const Field2D& u, int i, int j) const {
    const GridTY& g = grid();
    const double c = u(i, j);
    double s = 0.0;
    if (i > 0) s += cond_t(i - 1, j) * (u(i - 1, j) - c);
    if (i < g.Nt) s += cond_t(i, j) * (u(i + 1, j) - c);
    if (j > 0) s += cond_y(i, j - 1) * (u(i, j - 1) - c);
    if (j < g.Ny) s += cond_y(i, j) * (u(i, j + 1) - c);
    return s;
}

Field2D ExtensionOperator::with_boundary_values(const Field2D& u) const {
    const GridTY& g = grid();
    Field2D out = u;
    for (int i = 0; i <= g.Nt; ++i)
        for (int j = 0; j <= g.Ny; ++j)
            if (!is_unknown(i, j)) out(i, j) = problem_.bc.value(g.t[i], g.y[j]);
    return out;
}

Field2D ExtensionOperator::residual(const Field2D& u) const {
    const GridTY& g = grid();
    Field2D r(problem_.grid);
    for (int i = 0; i <= g.Nt; ++i) {
        for (int j = 0; j <= g.Ny; ++j) {
            if (!is_unknown(i, j)) {
                r(i, j) = u(i, j) - problem_.bc.value(g.t[i], g.y[j]);
                continue;
            }
            double s = inflow(u, i, j);
            if (j == 0) s += cell_t_[i] * problem_.potential->f(u(i, 0)) / d_;
            r(i, j) = s / row_scale(i, j);
        }
    }
    return r;
}

double ExtensionOperator::residual_norm(const Field2D& u) const { return residual(u).max_abs(); }

ExtensionOperator::EnergyParts ExtensionOperator::energy_parts(const Field2D& u) const {
    const GridTY& g = grid();
    EnergyParts e;
    for (int i = 0; i <= g.Nt; ++i) {
        for (int j = 0; j <= g.Ny; ++j) {
            if (i < g.Nt) {
                double du = u(i + 1, j) - u(i, j);
                e.gradient += 0.5 * cond_t(i, j) * du * du;
            }
            if (j < g.Ny) {
                double du = u(i, j + 1) - u(i, j);
                e.gradient += 0.5 * cond_y(i, j) * du * du;
            }
        }
    }
    if (problem_.bc.bottom_reaction) {
        const Potential& F = *problem_.potential;
        const double F1 = F.F(1.0);
        for (int i = 0; i <= g.Nt; ++i) e.potential += cell_t_[i] * (F.F(u(i, 0)) - F1) / d_;
    }
    return e;
}

double energy(const Field2D& u, const ExtensionOperator& op) {
    return op.energy_parts(u).total();
}

/// Sparse Hessian of the discrete energy over the unknowns; pattern fixed per operator.
class NewtonSystem {
public:
    explicit NewtonSystem(const ExtensionOperator& op) : op_(op) {}

    // H = Laplacian + reaction curvature (full) or its positive part (flow) + mass / tau.
    void assemble(const Field2D& u, bool full_reaction, double inv_tau) {
        const GridTY& g = op_.grid();
        const double d = op_.d_;
        trips_.clear();
        trips_.reserve(static_cast<std::size_t>(op_.unknown_count()) * 5);
        for (int i = 0; i <= g.Nt; ++i) {
            for (int j = 0; j <= g.Ny; ++j) {
                int k = op_.unknown_index(i, j);
                if (k < 0) continue;
                double diag = 0.0;
                auto link = [&](int ni, int nj, double c) {
                    diag += c;
                    int m = op_.unknown_index(ni, nj);
                    if (m >= 0) trips_.emplace_back(k, m, -c);
                };
                if (i > 0) link(i - 1, j, op_.cond_t(i - 1, j));
                if (i < g.Nt) link(i + 1, j, op_.cond_t(i, j));
                if (j > 0) link(i, j - 1, op_.cond_y(i, j - 1));
                if (j < g.Ny) link(i, j + 1, op_.cond_y(i, j));
                if (j == 0 && op_.problem_.bc.bottom_reaction) {
                    double curv = op_.problem_.potential->F_second(u(i, 0));
                    if (!full_reaction) curv = std::max(curv, 0.0);
                    diag += op_.cell_t(i) * curv / d;
                }
                diag += inv_tau * op_.cell_t(i) * op_.cell_y(j);
                trips_.emplace_back(k, k, diag);
            }
        }
        H_.resize(op_.unknown_count(), op_.unknown_count());
        H_.setFromTriplets(trips_.begin(), trips_.end());
    }

    const SpMat& matrix() const { return H_; }

    // Solves H x = rhs; returns false on breakdown.
    bool solve(const Vec& rhs, Vec& x) {
        if (!analyzed_) {
            ldlt_.analyzePattern(H_);
            analyzed_ = true;
        }
        ldlt_.factorize(H_);
        if (ldlt_.info() == Eigen::Success) {
            x = ldlt_.solve(rhs);
            if (ldlt_.info() == Eigen::Success && x.allFinite()) return true;
        }
        Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
        lu.compute(H_);
        if (lu.info() != Eigen::Success) return false;
        x = lu.solve(rhs);
        return lu.info() == Eigen::Success && x.allFinite();
    }

    // Unscaled residual (minus the energy gradient) over the unknowns.
    Vec gradient_residual(const Field2D& u) const {
        const GridTY& g = op_.grid();
        Vec r(op_.unknown_count());
        for (int i = 0; i <= g.Nt; ++i) {
            for (int j = 0; j <= g.Ny; ++j) {
                int k = op_.unknown_index(i, j);
                if (k < 0) continue;
                double s = op_.inflow(u, i, j);
                if (j == 0) s += op_.cell_t(i) * op_.problem_.potential->f(u(i, 0)) / op_.d_;
                r[k] = s;
            }
        }
        return r;
    }

    Field2D step(const Field2D& u, const Vec& delta, double alpha) const {
        const GridTY& g = op_.grid();
        Field2D out = u;
        for (int i = 0; i <= g.Nt; ++i)
            for (int j = 0; j <= g.Ny; ++j)
                if (int k = op_.unknown_index(i, j); k >= 0) out(i, j) += alpha * delta[k];
        return out;
    }

private:
    const ExtensionOperator& op_;
    std::vector<Eigen::Triplet<double>> trips_;
    SpMat H_;
    Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt_;
    bool analyzed_ = false;
};

SolveResult solve_newton(const Field2D& initial, const ExtensionOperator& op,
                         const SolverConfig& cfg) {
    if (static_cast<int>(initial.values().size()) != op.grid().nodes())
        throw std::invalid_argument("solve_newton: field and operator grids differ");
    NewtonSystem sys(op);
    Field2D u = op.with_boundary_values(initial);
    SolveReport rep;
    double r = op.residual_norm(u);
    rep.residual_history.push_back(r);

    auto fail = [&](const std::string& why) {
        rep.converged = false;
        rep.final_energy = energy(u, op);
        rep.message = why;
        throw SolveFailure("solve_newton: " + why, rep);
    };

    while (r > cfg.tol) {
        if (rep.iterations >= cfg.max_iters)
            fail("no convergence after " + std::to_string(cfg.max_iters) + " iterations (residual " +
                 std::to_string(r) + ")");
        ++rep.iterations;
        sys.assemble(u, true, 0.0);
        Vec delta;
        if (!sys.solve(sys.gradient_residual(u), delta)) fail("linear solve breakdown");

        bool accepted = false;
        double alpha = 1.0;
        for (int h = 0; h <= cfg.max_halvings; ++h) {
            Field2D trial = sys.step(u, delta, alpha);
            double rt = op.residual_norm(trial);
            if (rt < r || !cfg.damping) {
                if (h > 0) ++rep.damping_events;
                u = std::move(trial);
                r = rt;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            // Newton stalled: descend the energy with semi-implicit gradient flow.
            ++rep.damping_events;
            double inv_tau = 1.0;
            double e = energy(u, op);
            for (int s = 0; s < cfg.flow_steps; ++s) {
                sys.assemble(u, false, inv_tau);
                Vec dflow;
                if (!sys.solve(sys.gradient_residual(u), dflow)) fail("linear solve breakdown");
                Field2D trial = sys.step(u, dflow, 1.0);
                double et = energy(trial, op);
                if (et < e) {
                    u = std::move(trial);
                    e = et;
                    inv_tau = std::max(inv_tau * 0.5, 1e-8);
                    ++rep.flow_steps;
                } else {
                    inv_tau *= 4.0;
                }
            }
            r = op.residual_norm(u);
        }
        rep.residual_history.push_back(r);
        if (!std::isfinite(r)) fail("non-finite residual");
    }
    // Polish: quadratic convergence usually leaves room down to rounding level.
    for (int k = 0; k < cfg.polish_steps && r > 0.0; ++k) {
        sys.assemble(u, true, 0.0);
        Vec delta;
        if (!sys.solve(sys.gradient_residual(u), delta)) break;
        Field2D trial = sys.step(u, delta, 1.0);
        double rt = op.residual_norm(trial);
        if (!(rt < r)) break;
        u = std::move(trial);
        r = rt;
        ++rep.iterations;
        rep.residual_history.push_back(r);
    }
    rep.converged = true;
    rep.final_energy = energy(u, op);
    return {std::move(u), std::move(rep)};
}

Eigen::SparseMatrix<double> energy_hessian(const Field2D& u, const ExtensionOperator& op) {
    NewtonSystem sys(op);
    sys.assemble(u, true, 0.0);
    return sys.matrix();
}

Eigen::VectorXd lumped_mass(const ExtensionOperator& op) {
    const GridTY& g = op.grid();
    Vec m(op.unknown_count());
    for (int i = 0; i <= g.Nt; ++i)
        for (int j = 0; j <= g.Ny; ++j)
            if (int k = op.unknown_index(i, j); k >= 0) m[k] = op.cell_t(i) * op.cell_y(j);
    return m;
}

std::vector<double> dtn_numeric(const Field2D& u, const ExtensionOperator& op, DtnMethod method) {
    const GridTY& g = op.grid();
    const double gam = op.problem().gamma;
    const double d = d_gamma(gam);
    std::vector<double> out(g.Nt + 1);
    if (method == DtnMethod::kFlux) {
        for (int i = 0; i <= g.Nt; ++i) out[i] = -d * op.inflow(u, i, 0) / op.cell_t(i);
        return out;
    }
    constexpr int kRows = 4;
    if (g.Ny < kRows) throw std::invalid_argument("dtn_numeric: too few y nodes");
    const double p = 2.0 * gam;
    double s11 = 0, s12 = 0, s22 = 0;
    std::array<double, kRows> b1{}, b2{};
    for (int j = 1; j <= kRows; ++j) {
        b1[j - 1] = std::pow(g.y[j], p);
        b2[j - 1] = g.y[j] * g.y[j];
        s11 += b1[j - 1] * b1[j - 1];
        s12 += b1[j - 1] * b2[j - 1];
        s22 += b2[j - 1] * b2[j - 1];
    }
    const double det = s11 * s22 - s12 * s12;
    if (!(det > 1e-12 * s11 * s22))
        throw std::runtime_error("dtn_numeric: boundary fit is ill-conditioned");
    for (int i = 0; i <= g.Nt; ++i) {
        double r1 = 0, r2 = 0;
        for (int j = 1; j <= kRows; ++j) {
            double du = u(i, j) - u(i, 0);
            r1 += b1[j - 1] * du;
            r2 += b2[j - 1] * du;
        }
        double c = (s22 * r1 - s12 * r2) / det;
        out[i] = -d * p * c;
    }
    return out;
}

RadialSolveResult radial_solve(const RadialFn& w, double gamma, const RadialSolveConfig& cfg) {
    const double q = cfg.q > 0.0 ? cfg.q : default_grading(gamma);
    auto grid = std::make_shared<const GridTY>(build_radial_grid(w.L, cfg.R, w.intervals(), cfg.Ny, q));
    ExtensionProblem p;
    p.grid = grid;
    p.gamma = gamma;
    p.warp = Warp::kSinh;
    p.warp_power = cfg.n - 1;
    p.bc.left = Side::kNeumann;
    p.bc.right = Side::kDirichlet;
    p.bc.top = Side::kDirichlet;
    p.bc.bottom_reaction = false;
    const double h = w.step();
    const std::vector<double> samples = w.samples;
    p.bc.value = [samples, h](double r, double y) {
        if (y != 0.0) return 0.0;
        auto k = static_cast<std::size_t>(std::lround(r / h));
        return k < samples.size() ? samples[k] : 0.0;
    };
    ExtensionOperator op(std::move(p));
    SolveResult sol = solve_newton(Field2D(grid), op, cfg.solver);
    RadialFn dtn;
    dtn.L = w.L;
    dtn.samples = dtn_numeric(sol.field, op, cfg.dtn);
    dtn.insufficient_decay = w.insufficient_decay;
    return {std::move(sol.field), std::move(dtn), std::move(sol.report)};
}

SpectralCheck spectral_check(double gamma, const SpectralCheckConfig& cfg) {
    if (cfg.reference_factor < 1) throw std::invalid_argument("spectral_check: reference_factor must be >= 1");
    const double radius = cfg.bump_radius;
    auto bump = [radius](double r) { return smooth_bump(r, radius); };
    SpectralCheck out;
    out.data = RadialFn::sample(bump, cfg.L, cfg.N);
    RadialSolveResult rs = radial_solve(out.data, gamma, cfg.solve);
    out.numeric = std::move(rs.dtn);
    out.report = std::move(rs.report);

    const int k = cfg.reference_factor;
    RadialFn fine = frac_laplacian_radial_h3(RadialFn::sample(bump, cfg.L, cfg.N * k), gamma);
    out.reference.L = cfg.L;
    out.reference.insufficient_decay = fine.insufficient_decay;
    for (int j = 0; j <= cfg.N; ++j) out.reference.samples.push_back(fine.samples[j * k]);

    double num = 0.0, den = 0.0;
    for (int j = 1; j <= cfg.N; ++j) {
        double wt = std::pow(std::sinh(out.data.rho(j)), 2);
        double e = out.numeric.samples[j] - out.reference.samples[j];
        num += wt * e * e;
        den += wt * out.reference.samples[j] * out.reference.samples[j];
    }
    out.rel_l2 = std::sqrt(num / den);
    return out;
}

void write_field_csv(const Field2D& u, const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw std::runtime_error("cannot open " + path);
    const GridTY& g = u.grid();
    std::fprintf(fp, "t,y,u\n");
    for (int i = 0; i <= g.Nt; ++i)
        for (int j = 0; j <= g.Ny; ++j)
            std::fprintf(fp, "%.17g,%.17g,%.17g\n", g.t[i], g.y[j], u(i, j));
    std::fclose(fp);
}

namespace {

template <class T>
void put_le(std::ofstream& os, T v) {
    static_assert(std::endian::native == std::endian::little, "big-endian hosts unsupported");
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get_le(std::ifstream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw std::runtime_error("read_field_binary: truncated file");
    return v;
}

}  // namespace

void write_field_binary(const Field2D& u, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path);
    const GridTY& g = u.grid();
    put_le<std::int32_t>(os, g.Nt);
    put_le<std::int32_t>(os, g.Ny);
    put_le<double>(os, g.T());
    put_le<double>(os, g.R);
    put_le<double>(os, g.q);
    for (double v : u.values()) put_le<double>(os, v);
}

Field2D read_field_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    auto Nt = get_le<std::int32_t>(is);
    auto Ny = get_le<std::int32_t>(is);
    auto T = get_le<double>(is);
    auto R = get_le<double>(is);
    auto q = get_le<double>(is);
    Field2D u(std::make_shared<const GridTY>(build_grid(T, R, Nt, Ny, q)));
    for (double& v : u.values()) v = get_le<double>(is);
    return u;
}

}  // namespace hyplayer
