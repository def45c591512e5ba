#include "hyplayer/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hyplayer {

namespace {

std::vector<double> uniform_nodes(double lo, double hi, int cells) {
    std::vector<double> out(cells + 1);
    for (int i = 0; i <= cells; ++i) out[i] = lo + (hi - lo) * i / cells;
    out[cells] = hi;
    return out;
}

void check_strip(double width, double R, int Nt, int Ny, double q) {
    if (!(width > 0.0) || !(R > 0.0)) throw std::invalid_argument("grid: extents must be positive");
    if (Nt < 8 || Ny < 8) throw std::invalid_argument("grid: Nt and Ny must be at least 8");
    if (!(q >= 1.0)) throw std::invalid_argument("grid: grading exponent q must be >= 1");
}

}  // namespace

std::vector<double> graded_nodes(double R, int Ny, double q) {
    if (!(R > 0.0) || Ny < 1 || !(q >= 1.0))
        throw std::invalid_argument("graded_nodes: need R > 0, Ny >= 1, q >= 1");
    std::vector<double> y(Ny + 1);
    for (int j = 0; j <= Ny; ++j) y[j] = R * std::pow(static_cast<double>(j) / Ny, q);
    y[Ny] = R;
    return y;
}

double default_grading(double gamma) { return std::max(1.0, 1.5 / gamma); }

GridTY build_grid(double T, double R, int Nt, int Ny, double q) {
    check_strip(T, R, Nt, Ny, q);
    GridTY g;
    g.t_lo = -T;
    g.t_hi = T;
    g.R = R;
    g.Nt = Nt;
    g.Ny = Ny;
    g.q = q;
    g.t = uniform_nodes(-T, T, Nt);
    g.y = graded_nodes(R, Ny, q);
    return g;
}

GridTY build_radial_grid(double L, double R, int Nr, int Ny, double q) {
    check_strip(L, R, Nr, Ny, q);
    GridTY g;
    g.t_lo = 0.0;
    g.t_hi = L;
    g.R = R;
    g.Nt = Nr;
    g.Ny = Ny;
    g.q = q;
    g.t = uniform_nodes(0.0, L, Nr);
    g.y = graded_nodes(R, Ny, q);
    return g;
}

GridTY extend_height(const GridTY& grid, double R_new) {
    if (!(R_new > grid.R)) throw std::invalid_argument("extend_height: R_new must exceed R");
    GridTY g = grid;
    const double dy = grid.y[grid.Ny] - grid.y[grid.Ny - 1];
    const int extra = static_cast<int>(std::ceil((R_new - grid.R) / dy - 1e-9));
    for (int k = 1; k <= extra; ++k) g.y.push_back(grid.R + (R_new - grid.R) * k / extra);
    g.Ny = static_cast<int>(g.y.size()) - 1;
    g.R = R_new;
    return g;
}

Field2D::Field2D(std::shared_ptr<const GridTY> grid, double fill)
    : grid_(std::move(grid)), values_(grid_->nodes(), fill) {}

std::vector<double> Field2D::trace() const {
    std::vector<double> w(grid_->Nt + 1);
    for (int i = 0; i <= grid_->Nt; ++i) w[i] = (*this)(i, 0);
    return w;
}

double Field2D::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace hyplayer
