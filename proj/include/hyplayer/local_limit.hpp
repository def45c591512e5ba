#pragma once

#include <vector>

#include "hyplayer/layer.hpp"
#include "hyplayer/model.hpp"

namespace hyplayer {

/// Solution of -w'' - c tanh(t) w' = f(w) on [-T, T] with w(+-T) = +-tanh(lambda_+- T / 2),
/// lambda = (c + sqrt(c^2 + 4 F''(+-1))) / 2 the tail rate of the linearization at the well
/// (tanh(T / sqrt 2) for c = 0 and the quartic).
struct OdeProfile {
    std::vector<double> t;
    std::vector<double> w;
    std::vector<double> wp;
    /// h^2-scaled collocation residual per interior node (0 at the ends).
    std::vector<double> residual;
    double drift = 2.0;
    int iterations = 0;
    double max_residual = 0.0;
};

enum class OdeScheme {
    kCentral2,  ///< three-point central differences
    kCentral4,  ///< five-point central differences, one-sided sixth-point stencils next to the ends
};

struct OdeConfig {
    double tol = 1e-12;
    int max_iters = 100;
    OdeScheme scheme = OdeScheme::kCentral4;
};

/// Damped Newton on finite-difference collocation, initialized at tanh(t). The residual is
/// scaled by h^2. Requires N >= 200. Throws std::runtime_error on non-convergence.
OdeProfile ode_layer(const Potential& potential, double drift, double T, int N,
                     const OdeConfig& cfg = {});

/// Drift n - 1.
OdeProfile ode_layer(const ModelParams& params, double T, int N, const OdeConfig& cfg = {});

/// 1/2 w'^2 - c int_t^T tanh(s) w'^2 ds - (F(w(t)) - F(L+)) with L+ = w(T), per node.
/// The tail integral uses the trapezoidal rule on the solution grid.
std::vector<double> ode_hamiltonian_check(const OdeProfile& profile, const Potential& potential);

/// Limit inequality 1/2 w'^2 - c int_t^T tanh(s) w'^2 ds >= F(w) - F(1): returns the pointwise
/// slack (left minus right), which must be >= -tol.
std::vector<double> limit_inequality_slack(const OdeProfile& profile, const Potential& potential);

/// Linear interpolation of (t, w) at s; clamps outside.
double interpolate(const std::vector<double>& t, const std::vector<double>& w, double s);

struct LimitRow {
    double gamma = 0.0;
    double e = 0.0;  ///< sup_{|t| <= 5} |w_gamma(t + t0) - w_bar(t)|
    double e_prime = 0.0;
    double e_second = 0.0;
    double m[3] = {0, 0, 0};         ///< (1+a) int y^a u_t^2 dy at t = 0, 1, 2
    double m_mismatch[3] = {0, 0, 0};  ///< |m - w_bar'(t)^2|
    double d_gamma_ratio = 0.0;        ///< d_gamma / (1 + a)
    double t0 = 0.0;
    bool solved = false;
};

struct LimitStudy {
    OdeProfile limit;
    std::vector<LimitRow> rows;
    double L_plus = 0.0;
    double L_minus = 0.0;
    /// min of limit_inequality_slack over |t| <= 8
    double inequality_min_slack = 0.0;
};

/// Runs the extension layer for each gamma and compares with the gamma = 1 profile.
/// The ODE uses the layer's T with 40 * Nt intervals. A failed solve stops the study and
/// leaves the remaining rows unsolved.
LimitStudy gamma_limit_study(const std::vector<double>& gammas, const ModelParams& params,
                             const LayerGridConfig& grid_cfg = {},
                             const SolverConfig& solver_cfg = {});

}  // namespace hyplayer
