#pragma once

#include <vector>

#include "hyplayer/grid.hpp"
#include "hyplayer/model.hpp"

namespace hyplayer {

/// Hamiltonian diagnostics of a layer field, one entry per t node.
struct HamiltonianTrace {
    std::vector<double> t;
    /// 1/2 int y^a (u_t^2 - u_y^2) dy - (F(u(t,0)) - F(1)) / d_gamma
    std::vector<double> V;
    /// -(n-1) tanh t int y^a u_t^2 dy
    std::vector<double> Vprime_formula;
    /// int y^a u_t^2 dy
    std::vector<double> ut_integral;
    /// int y^a u_y^2 dy
    std::vector<double> uy_integral;
    /// Centered differences of V.
    std::vector<double> Vprime_numeric;
    /// (cosh^{n-1} t V)_t by centered differences.
    std::vector<double> identity_lhs;
    /// (cosh^{n-1} t)_t [-1/2 int y^a (u_t^2 + u_y^2) dy - (F(u) - F(1)) / d_gamma]
    std::vector<double> identity_rhs;

    std::vector<double> weighted_identity_residual() const;
};

/// All columns. The y-integrals are truncated at the top of the grid. u_t uses centered
/// differences (one-sided second order at the ends); the u_y^2 integral is summed cell by
/// cell as (1-a) (u_{j+1} - u_j)^2 / (y_{j+1}^{1-a} - y_j^{1-a}), exact for the boundary mode.
HamiltonianTrace hamiltonian_trace(const Field2D& u, const ModelParams& params);

std::vector<double> hamiltonian_V(const Field2D& u, const ModelParams& params);
std::vector<double> hamiltonian_Vprime(const Field2D& u, const ModelParams& params);
std::vector<double> weighted_identity_residual(const Field2D& u, const ModelParams& params);

/// sqrt(sum (a-b)^2 / sum b^2) over nodes with |t| <= window.
double relative_l2(const std::vector<double>& t, const std::vector<double>& a,
                   const std::vector<double>& b, double window);

}  // namespace hyplayer
