#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "hyplayer/extension.hpp"

namespace hyplayer {

/// Boundary trace of a layer and its qualitative diagnostics.
struct LayerProfile {
    std::vector<double> t;
    std::vector<double> trace;
    std::vector<double> dw_dt;
    double t0 = 0.0;
    /// min over i of (w_{i+1} - w_i) / h
    double monotonicity_margin = 0.0;
    double decay_plus = 0.0;
    double decay_minus = 0.0;
    double L_plus = 0.0;
    double L_minus = 0.0;
};

struct LayerGridConfig {
    double T = 10.0;
    double R = 10.0;
    int Nt = 400;
    int Ny = 120;
    /// <= 0 selects default_grading(gamma).
    double q = 0.0;
    TopCondition top = TopCondition::kNatural;
    /// Allowed |L_plus - 1| and |L_minus + 1|.
    double tail_tol = 1e-3;
};

enum class InitialGuess {
    kComparison,  ///< tanh(mu t) everywhere
    kRamp,        ///< clamp(t / 2, -1, 1), independent of y
};

struct LayerResult {
    LayerProfile profile;
    Field2D field;
    SolveReport report;
    ExtensionOperator op;
};

/// Raised when a computed layer violates one of the defining properties.
class LayerDiagnosticError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::shared_ptr<const GridTY> layer_grid(const ModelParams& params, const LayerGridConfig& cfg);

/// Solves the layer problem and fills the profile. Throws LayerDiagnosticError when the trace
/// is not strictly increasing, the tail averages miss +-1 by more than cfg.tail_tol, or the zero
/// crossing is not interior. Solver failures propagate as SolveFailure.
LayerResult compute_layer(const ModelParams& params, const LayerGridConfig& grid_cfg = {},
                          const SolverConfig& solver_cfg = {},
                          InitialGuess guess = InitialGuess::kComparison);

/// Linear interpolation at the unique sign change. Throws std::runtime_error when the trace
/// changes sign zero or several times.
double find_zero_crossing(const std::vector<double>& t, const std::vector<double>& trace);

struct DecayWindow {
    double lo = 2.0;  ///< |t| range used on each side
    double hi = 8.0;
};

struct DecayRates {
    double plus = 0.0;
    double minus = 0.0;
};

/// Least-squares slopes of log(1 - w) for t in [lo, hi] and of log(w + 1) for t in [-hi, -lo],
/// keeping samples whose tail lies in [1e-8, 1e-2]. Throws std::runtime_error when fewer than
/// 4 samples remain on a side.
DecayRates decay_rates(const std::vector<double>& t, const std::vector<double>& trace,
                       DecayWindow window = {});

struct NecessaryConditionReport {
    bool passed = false;
    double min_F = 0.0;
    double F_plus = 0.0;
    double F_minus = 0.0;
    std::string detail;
};

/// Checks min F >= F(L+-) - tol on a uniform sample of [-1, 1] and |F(L+) - F(L-)| <= tol.
NecessaryConditionReport necessary_condition_check(const Potential& potential, double L_plus,
                                                   double L_minus, int samples = 2001,
                                                   double tol = 1e-8);

/// Smallest eigenvalue of H xi = lambda M xi, with H the second variation of the discrete energy
/// at u and M the cell measures; xi vanishes on the Dirichlet part of the boundary.
double stability_smallest_eigenvalue(const Field2D& u, const ExtensionOperator& op);

/// sup |u(t, y) + u(-t, y)| over the grid (t nodes symmetric about 0).
double oddness_defect(const Field2D& u);

/// min over rows j and i < Nt of (u_{i+1,j} - u_{i,j}) / h.
double min_t_increment(const Field2D& u);

}  // namespace hyplayer
