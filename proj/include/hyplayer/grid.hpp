#pragma once

#include <memory>
#include <vector>

namespace hyplayer {

/// Tensor grid on a (t, y) strip: uniform nodes in t, graded nodes in y clustered at y = 0.
struct GridTY {
    double t_lo = 0.0;
    double t_hi = 0.0;
    double R = 0.0;
    int Nt = 0;
    int Ny = 0;
    double q = 1.0;
    std::vector<double> t;  ///< Nt + 1 uniform nodes on [t_lo, t_hi]
    std::vector<double> y;  ///< Ny + 1 nodes, y[0] = 0, y[Ny] = R

    double T() const { return 0.5 * (t_hi - t_lo); }
    double ht() const { return (t_hi - t_lo) / Nt; }
    int nodes() const { return (Nt + 1) * (Ny + 1); }
    int index(int i, int j) const { return i * (Ny + 1) + j; }
};

/// y_j = R (j / Ny)^q, j = 0..Ny.
std::vector<double> graded_nodes(double R, int Ny, double q);

/// Grading exponent max(1, 3 / (2 gamma)).
double default_grading(double gamma);

/// Grid on [-T, T] x [0, R]. Requires T, R > 0, Nt, Ny >= 8 and q >= 1.
GridTY build_grid(double T, double R, int Nt, int Ny, double q);

/// Grid on [0, L] x [0, R] for radial problems.
GridTY build_radial_grid(double L, double R, int Nr, int Ny, double q);

/// Same nodes on [0, R], continued with the last cell size until R_new is reached.
GridTY extend_height(const GridTY& grid, double R_new);

/// Nodal scalar field on a GridTY, row-major with y fastest.
class Field2D {
public:
    explicit Field2D(std::shared_ptr<const GridTY> grid, double fill = 0.0);

    double& operator()(int i, int j) { return values_[grid_->index(i, j)]; }
    double operator()(int i, int j) const { return values_[grid_->index(i, j)]; }

    const GridTY& grid() const { return *grid_; }
    const std::shared_ptr<const GridTY>& grid_ptr() const { return grid_; }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    /// Boundary trace u(t, 0).
    std::vector<double> trace() const;
    double max_abs() const;

private:
    std::shared_ptr<const GridTY> grid_;
    std::vector<double> values_;
};

}  // namespace hyplayer
