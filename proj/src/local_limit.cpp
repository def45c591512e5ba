#include "hyplayer/local_limit.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hyplayer/hamiltonian.hpp"

namespace hyplayer {

namespace {

// Tail integrals int_{t_i}^{t_end} g by the trapezoidal rule.
std::vector<double> tail_integral(const std::vector<double>& t, const std::vector<double>& g) {
    std::vector<double> out(t.size(), 0.0);
    for (std::size_t i = t.size() - 1; i-- > 0;)
        out[i] = out[i + 1] + 0.5 * (t[i + 1] - t[i]) * (g[i] + g[i + 1]);
    return out;
}

// Finite-difference weights for h^2 w'' and h w' at node i, over nodes first..first+size-1.
struct Stencil {
    int first = 0;
    std::vector<double> d2;
    std::vector<double> d1;
};

Stencil stencil_at(int i, int N, OdeScheme scheme) {
    if (scheme == OdeScheme::kCentral2) return {i - 1, {1.0, -2.0, 1.0}, {-0.5, 0.0, 0.5}};
    if (i >= 2 && i <= N - 2)
        return {i - 2,
                {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12},
                {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12}};
    Stencil s{0,
              {10.0 / 12, -15.0 / 12, -4.0 / 12, 14.0 / 12, -6.0 / 12, 1.0 / 12},
              {-3.0 / 12, -10.0 / 12, 18.0 / 12, -6.0 / 12, 1.0 / 12, 0.0}};
    if (i == 1) return s;
    // mirror for i = N - 1: d2 symmetric, d1 antisymmetric
    Stencil m{N - 5, std::vector<double>(6), std::vector<double>(6)};
    for (int k = 0; k < 6; ++k) {
        m.d2[5 - k] = s.d2[k];
        m.d1[5 - k] = -s.d1[k];
    }
    return m;
}

std::vector<double> derivative4(const std::vector<double>& w, double h) {
    const int N = static_cast<int>(w.size()) - 1;
    std::vector<double> d(N + 1);
    for (int i = 1; i < N; ++i) {
        Stencil s = stencil_at(i, N, OdeScheme::kCentral4);
        double acc = 0.0;
        for (std::size_t k = 0; k < s.d1.size(); ++k) acc += s.d1[k] * w[s.first + k];
        d[i] = acc / h;
    }
    d[0] = (-25.0 * w[0] + 48.0 * w[1] - 36.0 * w[2] + 16.0 * w[3] - 3.0 * w[4]) / (12.0 * h);
    d[N] = (25.0 * w[N] - 48.0 * w[N - 1] + 36.0 * w[N - 2] - 16.0 * w[N - 3] + 3.0 * w[N - 4]) /
           (12.0 * h);
    return d;
}

}  // namespace

OdeProfile ode_layer(const Potential& potential, double drift, double T, int N,
                     const OdeConfig& cfg) {
    if (N < 200) throw std::invalid_argument("ode_layer: N must be at least 200");
    if (!(T > 0.0)) throw std::invalid_argument("ode_layer: T must be positive");
    OdeProfile p;
    p.drift = drift;
    const double h = 2.0 * T / N;
    p.t.resize(N + 1);
    p.w.resize(N + 1);
    for (int i = 0; i <= N; ++i) {
        p.t[i] = -T + h * i;
        p.w[i] = std::tanh(p.t[i]);
    }
    p.t[N] = T;
    // Tail rates of the linearization at the wells; tanh(lambda T / 2) reduces to tanh(T / sqrt 2)
    // for the drift-free quartic.
    auto [Fm, Fp] = potential.second_derivatives_at_wells();
    const double lam_minus = 0.5 * (drift + std::sqrt(drift * drift + 4.0 * Fm));
    const double lam_plus = 0.5 * (drift + std::sqrt(drift * drift + 4.0 * Fp));
    p.w[0] = -std::tanh(0.5 * lam_minus * T);
    p.w[N] = std::tanh(0.5 * lam_plus * T);

    std::vector<Stencil> st(N + 1);
    for (int i = 1; i < N; ++i) st[i] = stencil_at(i, N, cfg.scheme);

    // h^2 (-w'' - c tanh(t) w' - f(w)) at interior nodes. The iterate and the residual are kept
    // in extended precision: for weak drift the layer is nearly translation invariant and
    // double-precision rounding of the residual shifts the whole profile.
    using Real = long double;
    std::vector<Real> w(p.w.begin(), p.w.end());
    auto residual = [&](const std::vector<Real>& v, Eigen::VectorXd& r) {
        double mx = 0.0;
        for (int i = 1; i < N; ++i) {
            const Stencil& s = st[i];
            Real c = drift * std::tanh(static_cast<Real>(p.t[i]));
            Real acc = 0.0;
            for (std::size_t k = 0; k < s.d2.size(); ++k)
                acc -= (s.d2[k] + h * c * s.d1[k]) * (v[s.first + k] - v[i]);
            acc -= static_cast<Real>(h) * h * potential.f(static_cast<double>(v[i]));
            r[i - 1] = static_cast<double>(acc);
            mx = std::max(mx, std::abs(r[i - 1]));
        }
        return mx;
    };
    const int m = N - 1;
    Eigen::VectorXd r(m);
    double norm = residual(w, r);
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    bool analyzed = false;
    // After reaching tol a few undamped polishing steps are tried; each must lower the residual.
    int polish = 0;
    while (norm > cfg.tol || polish < 3) {
        const bool polishing = norm <= cfg.tol;
        if (polishing) ++polish;
        if (p.iterations >= cfg.max_iters) {
            if (polishing) break;
            throw std::runtime_error("ode_layer: Newton did not converge (residual " +
                                     std::to_string(norm) + ")");
        }
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(static_cast<std::size_t>(m) * 6);
        for (int i = 1; i < N; ++i) {
            const Stencil& s = st[i];
            double c = drift * std::tanh(p.t[i]);
            for (std::size_t k = 0; k < s.d2.size(); ++k) {
                int col = s.first + static_cast<int>(k);
                double v = -(s.d2[k] + h * c * s.d1[k]);
                if (col == i) v -= h * h * potential.fprime(static_cast<double>(w[i]));
                if (col >= 1 && col <= N - 1) trips.emplace_back(i - 1, col - 1, v);
            }
        }
        Eigen::SparseMatrix<double> J(m, m);
        J.setFromTriplets(trips.begin(), trips.end());
        if (!analyzed) {
            lu.analyzePattern(J);
            analyzed = true;
        }
        lu.factorize(J);
        if (lu.info() != Eigen::Success) throw std::runtime_error("ode_layer: singular Jacobian");
        Eigen::VectorXd delta = lu.solve(-r);
        bool accepted = false;
        double alpha = 1.0;
        for (int halving = 0; halving <= (polishing ? 0 : 30); ++halving) {
            std::vector<Real> trial = w;
            for (int i = 1; i < N; ++i) trial[i] += alpha * delta[i - 1];
            Eigen::VectorXd rt(m);
            double nt = residual(trial, rt);
            if (nt < norm || (!polishing && halving == 30)) {
                w = std::move(trial);
                r = std::move(rt);
                norm = nt;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break;
        ++p.iterations;
    }
    for (int i = 0; i <= N; ++i) p.w[i] = static_cast<double>(w[i]);
    p.max_residual = norm;
    p.residual.assign(N + 1, 0.0);
    for (int i = 1; i < N; ++i) p.residual[i] = r[i - 1];
    if (cfg.scheme == OdeScheme::kCentral4) {
        p.wp = derivative4(p.w, h);
    } else {
        p.wp.resize(N + 1);
        for (int i = 1; i < N; ++i) p.wp[i] = (p.w[i + 1] - p.w[i - 1]) / (2.0 * h);
        p.wp[0] = (-3.0 * p.w[0] + 4.0 * p.w[1] - p.w[2]) / (2.0 * h);
        p.wp[N] = (3.0 * p.w[N] - 4.0 * p.w[N - 1] + p.w[N - 2]) / (2.0 * h);
    }
    return p;
}

OdeProfile ode_layer(const ModelParams& params, double T, int N, const OdeConfig& cfg) {
    return ode_layer(params.potential(), params.n() - 1, T, N, cfg);
}

std::vector<double> ode_hamiltonian_check(const OdeProfile& p, const Potential& potential) {
    std::vector<double> g(p.t.size());
    for (std::size_t i = 0; i < p.t.size(); ++i) g[i] = std::tanh(p.t[i]) * p.wp[i] * p.wp[i];
    std::vector<double> tail = tail_integral(p.t, g);
    const double FL = potential.F(p.w.back());
    std::vector<double> res(p.t.size());
    for (std::size_t i = 0; i < p.t.size(); ++i)
        res[i] = 0.5 * p.wp[i] * p.wp[i] - p.drift * tail[i] - (potential.F(p.w[i]) - FL);
    return res;
}

std::vector<double> limit_inequality_slack(const OdeProfile& p, const Potential& potential) {
    std::vector<double> g(p.t.size());
    for (std::size_t i = 0; i < p.t.size(); ++i) g[i] = std::tanh(p.t[i]) * p.wp[i] * p.wp[i];
    std::vector<double> tail = tail_integral(p.t, g);
    const double F1 = potential.F(1.0);
    std::vector<double> s(p.t.size());
    for (std::size_t i = 0; i < p.t.size(); ++i)
        s[i] = 0.5 * p.wp[i] * p.wp[i] - p.drift * tail[i] - (potential.F(p.w[i]) - F1);
    return s;
}

double interpolate(const std::vector<double>& t, const std::vector<double>& w, double s) {
    if (s <= t.front()) return w.front();
    if (s >= t.back()) return w.back();
    auto it = std::upper_bound(t.begin(), t.end(), s);
    std::size_t k = static_cast<std::size_t>(it - t.begin());
    double f = (s - t[k - 1]) / (t[k] - t[k - 1]);
    return w[k - 1] + f * (w[k] - w[k - 1]);
}

LimitStudy gamma_limit_study(const std::vector<double>& gammas, const ModelParams& params,
                             const LayerGridConfig& grid_cfg, const SolverConfig& solver_cfg) {
    for (std::size_t k = 0; k < gammas.size(); ++k) {
        if (!(gammas[k] > 0.0 && gammas[k] < 1.0))
            throw std::invalid_argument("gamma_limit_study: gammas must lie in (0,1)");
        if (k > 0 && !(gammas[k] > gammas[k - 1]))
            throw std::invalid_argument("gamma_limit_study: gammas must increase");
    }
    LimitStudy study;
    const int ode_N = 40 * grid_cfg.Nt;
    study.limit = ode_layer(params.potential(), params.n() - 1, grid_cfg.T, ode_N);
    const OdeProfile& lim = study.limit;
    // limits of the gamma = 1 profile from its outer 5% bands
    {
        double sp = 0, sm = 0;
        int np = 0, nm = 0;
        const double band = 0.1 * grid_cfg.T;
        for (std::size_t i = 0; i < lim.t.size(); ++i) {
            if (lim.t[i] >= grid_cfg.T - band) sp += lim.w[i], ++np;
            if (lim.t[i] <= -grid_cfg.T + band) sm += lim.w[i], ++nm;
        }
        study.L_plus = sp / np;
        study.L_minus = sm / nm;
    }
    {
        std::vector<double> slack = limit_inequality_slack(lim, params.potential());
        double mn = INFINITY;
        for (std::size_t i = 0; i < lim.t.size(); ++i)
            if (std::abs(lim.t[i]) <= 8.0) mn = std::min(mn, slack[i]);
        study.inequality_min_slack = mn;
    }
    // second derivative of the limit profile from the ODE itself
    auto lim_wpp = [&](double s) {
        double w = interpolate(lim.t, lim.w, s), wp = interpolate(lim.t, lim.wp, s);
        return -lim.drift * std::tanh(s) * wp - params.potential().f(w);
    };

    study.rows.resize(gammas.size());
    for (std::size_t k = 0; k < gammas.size(); ++k) {
        LimitRow& row = study.rows[k];
        row.gamma = gammas[k];
        const double a = 1.0 - 2.0 * row.gamma;
        row.d_gamma_ratio = d_gamma(row.gamma) / (1.0 + a);
        ModelParams pg = params.with_gamma(row.gamma);
        LayerResult L = compute_layer(pg, grid_cfg, solver_cfg);
        const LayerProfile& p = L.profile;
        row.t0 = p.t0;
        const GridTY& g = L.field.grid();
        const double h = g.ht();
        for (std::size_t i = 1; i + 1 < p.t.size(); ++i) {
            double s = p.t[i] - row.t0;
            if (std::abs(s) > 5.0) continue;
            double wpp = (p.trace[i + 1] - 2.0 * p.trace[i] + p.trace[i - 1]) / (h * h);
            row.e = std::max(row.e, std::abs(p.trace[i] - interpolate(lim.t, lim.w, s)));
            row.e_prime = std::max(row.e_prime, std::abs(p.dw_dt[i] - interpolate(lim.t, lim.wp, s)));
            row.e_second = std::max(row.e_second, std::abs(wpp - lim_wpp(s)));
        }
        HamiltonianTrace ht = hamiltonian_trace(L.field, pg);
        for (int q = 0; q < 3; ++q) {
            double s = row.t0 + q;
            row.m[q] = (1.0 + a) * interpolate(ht.t, ht.ut_integral, s);
            double wp = interpolate(lim.t, lim.wp, static_cast<double>(q));
            row.m_mismatch[q] = std::abs(row.m[q] - wp * wp);
        }
        row.solved = true;
    }
    return study;
}

}  // namespace hyplayer
