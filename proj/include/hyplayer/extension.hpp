#pragma once

#include <Eigen/SparseCore>

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyplayer/grid.hpp"
#include "hyplayer/model.hpp"
#include "hyplayer/spectral_radial.hpp"

namespace hyplayer {

/// Warping factor of the base metric: cosh^p(t) in layer coordinates, sinh^p(r) in
/// geodesic polar coordinates.
enum class Warp { kCosh, kSinh };

enum class Side { kDirichlet, kNeumann };

/// Boundary conditions of the truncated strip. Dirichlet data is read from `value`.
struct BoundaryData {
    Side left = Side::kDirichlet;
    Side right = Side::kDirichlet;
    Side top = Side::kDirichlet;
    /// true: nonlinear reaction -d y^a u_y = f(u) at y = 0; false: Dirichlet at y = 0.
    bool bottom_reaction = true;
    std::function<double(double t, double y)> value = [](double, double) { return 0.0; };
};

/// Everything the discrete operator needs besides the field.
struct ExtensionProblem {
    std::shared_ptr<const GridTY> grid;
    double gamma = 0.5;
    Warp warp = Warp::kCosh;
    /// Exponent of the warping factor, n - 1; 0 removes the drift.
    double warp_power = 2.0;
    BoundaryData bc;
    /// Needed only when bc.bottom_reaction is set.
    std::shared_ptr<const Potential> potential;

    double a() const { return 1.0 - 2.0 * gamma; }
};

/// How the layer problem closes the strip at y = R.
enum class TopCondition {
    kComparison,  ///< Dirichlet data tanh(mu t)
    kNatural,     ///< zero weighted flux
};

/// Layer problem: reaction at y = 0, tanh(mu t) at t = +-T (and at y = R for kComparison).
ExtensionProblem layer_problem(const ModelParams& params, std::shared_ptr<const GridTY> grid,
                               TopCondition top = TopCondition::kNatural);

/// tanh(mu t). Throws std::domain_error unless mu > n - 1.
double comparison_v(double t, double mu, int n = 3);

/// Conservative finite-volume discretization of div(y^a w(t) grad u) = 0.
///
/// Nodes are vertex-centered. The control volume of node (i, j) is the product of the
/// t-interval between neighboring midpoints and the y-interval between midpoints, clipped
/// to the domain. t-faces use the weight at the face midpoint; y-faces use the conductance
/// (1 - a) / (y_{j+1}^{1-a} - y_j^{1-a}), which is exact for the y^{1-a} boundary mode.
/// The residual of an unknown node is the net inflow plus the reaction, which is minus the
/// gradient of the discrete energy.
class ExtensionOperator {
public:
    explicit ExtensionOperator(ExtensionProblem problem);

    const ExtensionProblem& problem() const { return problem_; }
    const GridTY& grid() const { return *problem_.grid; }

    bool is_unknown(int i, int j) const { return unknown_[grid().index(i, j)] >= 0; }
    /// Unknown number of node (i, j), or -1 for a Dirichlet node.
    int unknown_index(int i, int j) const { return unknown_[grid().index(i, j)]; }
    int unknown_count() const { return n_unknowns_; }

    /// Integral of the warping factor over the t-cell of node i.
    double cell_t(int i) const { return cell_t_[i]; }
    /// Integral of y^a over the y-cell of node j.
    double cell_y(int j) const { return cell_y_[j]; }
    /// Conductance between (i, j) and (i + 1, j).
    double cond_t(int i, int j) const { return face_t_[i] * cell_y_[j]; }
    /// Conductance between (i, j) and (i, j + 1).
    double cond_y(int i, int j) const { return cell_t_[i] * face_y_[j]; }

    /// Net diffusive inflow into the cell of node (i, j), no reaction.
    double inflow(const Field2D& u, int i, int j) const;

    /// Copy of u with Dirichlet nodes overwritten by the boundary data.
    Field2D with_boundary_values(const Field2D& u) const;

    /// Sum of the face conductances around node (i, j).
    double row_scale(int i, int j) const { return row_scale_[grid().index(i, j)]; }

    /// Residual field: (inflow + reaction) / row_scale(i, j) at unknowns, u - v at Dirichlet
    /// nodes. Both are nodal corrections in units of u.
    Field2D residual(const Field2D& u) const;
    /// Max norm of residual() over all nodes.
    double residual_norm(const Field2D& u) const;

    struct EnergyParts {
        double gradient = 0.0;   ///< 1/2 sum of conductance * jump^2
        double potential = 0.0;  ///< sum over the bottom row of cell_t (F(u) - F(1)) / d_gamma
        double total() const { return gradient + potential; }
    };
    EnergyParts energy_parts(const Field2D& u) const;

private:
    double warp_at(double t) const;

    ExtensionProblem problem_;
    double d_;
    std::vector<int> unknown_;
    int n_unknowns_ = 0;
    std::vector<double> cell_t_, cell_y_, face_t_, face_y_, row_scale_;

    friend class NewtonSystem;
};

struct SolverConfig {
    double tol = 1e-10;
    int max_iters = 60;
    bool damping = true;
    int max_halvings = 30;
    /// Gradient-flow steps taken each time Newton stalls.
    int flow_steps = 20;
    /// Extra undamped Newton steps after reaching tol, each kept only if it lowers the residual.
    int polish_steps = 2;
};

struct SolveReport {
    int iterations = 0;
    std::vector<double> residual_history;
    double final_energy = 0.0;
    bool converged = false;
    int damping_events = 0;
    int flow_steps = 0;
    std::string message;
};

struct SolveResult {
    Field2D field;
    SolveReport report;
};

/// Thrown when a solve does not reach the tolerance; carries the partial report.
class SolveFailure : public std::runtime_error {
public:
    SolveFailure(const std::string& what, SolveReport report)
        : std::runtime_error(what), report_(std::move(report)) {}
    const SolveReport& report() const { return report_; }

private:
    SolveReport report_;
};

/// Damped Newton on the residual with a sparse LDLT factorization.
///
/// Steps are halved until the residual norm decreases. When that fails the solver
/// falls back to semi-implicit gradient flow on the energy before retrying Newton.
/// Throws SolveFailure on non-convergence or linear solve breakdown.
SolveResult solve_newton(const Field2D& initial, const ExtensionOperator& op,
                         const SolverConfig& cfg = {});

double energy(const Field2D& u, const ExtensionOperator& op);

/// Hessian of the discrete energy over the unknowns (second variation, reaction term F'').
Eigen::SparseMatrix<double> energy_hessian(const Field2D& u, const ExtensionOperator& op);

/// Cell measure cell_t(i) * cell_y(j) per unknown, in unknown order.
Eigen::VectorXd lumped_mass(const ExtensionOperator& op);

enum class DtnMethod {
    kFit,   ///< least squares u = u0 + c y^{1-a} + b y^2 on the first nodes
    kFlux,  ///< discrete flux balance of the bottom cell
};

/// -d_gamma lim y^a u_y at y = 0, one value per t node.
std::vector<double> dtn_numeric(const Field2D& u, const ExtensionOperator& op,
                                DtnMethod method = DtnMethod::kFlux);

struct RadialSolveConfig {
    int n = 3;
    double R = 10.0;
    int Ny = 120;
    /// <= 0 selects default_grading(gamma).
    double q = 0.0;
    SolverConfig solver;
    DtnMethod dtn = DtnMethod::kFlux;
};

struct RadialSolveResult {
    Field2D field;
    RadialFn dtn;
    SolveReport report;
};

/// Linear extension of radial boundary data on [0, L] x [0, R]: Dirichlet w at y = 0,
/// symmetry at r = 0, zero at r = L and y = R. The r-grid is the sampling grid of w.
RadialSolveResult radial_solve(const RadialFn& w, double gamma, const RadialSolveConfig& cfg = {});

struct SpectralCheckConfig {
    double L = 10.0;
    int N = 200;
    double bump_radius = 3.0;
    /// The spectral reference is computed on a grid this many times finer and subsampled.
    int reference_factor = 8;
    RadialSolveConfig solve;
};

struct SpectralCheck {
    RadialFn data;
    RadialFn numeric;
    RadialFn reference;
    /// Relative L2 error with the radial volume weight sinh^2(rho).
    double rel_l2 = 0.0;
    SolveReport report;
};

/// Numeric DtN of the radial bump smooth_bump(rho, bump_radius) against the spectral multiplier.
SpectralCheck spectral_check(double gamma, const SpectralCheckConfig& cfg = {});

/// CSV with header t,y,u, one row per node.
void write_field_csv(const Field2D& u, const std::string& path);

/// Little-endian binary dump: int32 Nt, int32 Ny, float64 T, R, q, then (Nt+1)(Ny+1) float64
/// values with y fastest.
void write_field_binary(const Field2D& u, const std::string& path);
Field2D read_field_binary(const std::string& path);

}  // namespace hyplayer
