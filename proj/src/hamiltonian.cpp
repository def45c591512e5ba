#include "hyplayer/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>

namespace hyplayer {

namespace {

// Second-order derivative of uniformly spaced samples.
std::vector<double> diff_uniform(const std::vector<double>& v, double h) {
    const std::size_t n = v.size();
    std::vector<double> d(n);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    return d;
}

}  // namespace

HamiltonianTrace hamiltonian_trace(const Field2D& u, const ModelParams& params) {
    const GridTY& g = u.grid();
    const double a = params.a();
    const double d = d_gamma(params.gamma());
    const double p = params.n() - 1;
    const Potential& F = params.potential();
    const double h = g.ht();

    // y cell measures of y^a and face conductances
    std::vector<double> W(g.Ny + 1), kappa(g.Ny);
    auto prim = [a](double y) { return std::pow(y, 1.0 + a) / (1.0 + a); };
    for (int j = 0; j <= g.Ny; ++j) {
        double lo = j == 0 ? 0.0 : 0.5 * (g.y[j - 1] + g.y[j]);
        double hi = j == g.Ny ? g.y[j] : 0.5 * (g.y[j] + g.y[j + 1]);
        W[j] = prim(hi) - prim(lo);
    }
    for (int j = 0; j < g.Ny; ++j)
        kappa[j] = (1.0 - a) / (std::pow(g.y[j + 1], 1.0 - a) - std::pow(g.y[j], 1.0 - a));

    HamiltonianTrace ht;
    const int nt = g.Nt + 1;
    ht.t = g.t;
    std::vector<double> It(nt), Iy(nt), G(nt);
    std::vector<double> row(nt);
    for (int j = 0; j <= g.Ny; ++j) {
        for (int i = 0; i < nt; ++i) row[i] = u(i, j);
        std::vector<double> ut = diff_uniform(row, h);
        for (int i = 0; i < nt; ++i) It[i] += W[j] * ut[i] * ut[i];
    }
    for (int i = 0; i < nt; ++i) {
        for (int j = 0; j < g.Ny; ++j) {
            double du = u(i, j + 1) - u(i, j);
            Iy[i] += kappa[j] * du * du;
        }
        G[i] = (F.F(u(i, 0)) - F.F(1.0)) / d;
    }

    ht.V.resize(nt);
    ht.Vprime_formula.resize(nt);
    ht.identity_rhs.resize(nt);
    std::vector<double> cV(nt);
    for (int i = 0; i < nt; ++i) {
        double t = g.t[i];
        ht.V[i] = 0.5 * (It[i] - Iy[i]) - G[i];
        ht.Vprime_formula[i] = -p * std::tanh(t) * It[i];
        double c = std::pow(std::cosh(t), p);
        double dc = p == 0.0 ? 0.0 : p * std::pow(std::cosh(t), p - 1.0) * std::sinh(t);
        cV[i] = c * ht.V[i];
        ht.identity_rhs[i] = dc * (-0.5 * (It[i] + Iy[i]) - G[i]);
    }
    ht.ut_integral = It;
    ht.uy_integral = Iy;
    ht.Vprime_numeric = diff_uniform(ht.V, h);
    ht.identity_lhs = diff_uniform(cV, h);
    return ht;
}

std::vector<double> HamiltonianTrace::weighted_identity_residual() const {
    std::vector<double> r(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) r[i] = identity_lhs[i] - identity_rhs[i];
    return r;
}

std::vector<double> hamiltonian_V(const Field2D& u, const ModelParams& params) {
    return hamiltonian_trace(u, params).V;
}

std::vector<double> hamiltonian_Vprime(const Field2D& u, const ModelParams& params) {
    return hamiltonian_trace(u, params).Vprime_formula;
}

std::vector<double> weighted_identity_residual(const Field2D& u, const ModelParams& params) {
    return hamiltonian_trace(u, params).weighted_identity_residual();
}

double relative_l2(const std::vector<double>& t, const std::vector<double>& a,
                   const std::vector<double>& b, double window) {
    if (a.size() != t.size() || b.size() != t.size())
        throw std::invalid_argument("relative_l2: size mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (std::abs(t[i]) > window) continue;
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    if (!(den > 0.0)) return num > 0.0 ? INFINITY : 0.0;
    return std::sqrt(num / den);
}

}  // namespace hyplayer
