#include "hyplayer/kernel.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "hyplayer/specfun.hpp"

namespace hyplayer {

namespace {

// Ridders' extrapolated central difference.
double ridders_derivative(const std::function<double(double)>& fn, double x, double h0) {
    constexpr int kTab = 10;
    constexpr double kCon = 1.4;
    constexpr double kCon2 = kCon * kCon;
    double a[kTab][kTab];
    double hh = h0;
    a[0][0] = (fn(x + hh) - fn(x - hh)) / (2.0 * hh);
    double err = std::numeric_limits<double>::max();
    double ans = a[0][0];
    for (int i = 1; i < kTab; ++i) {
        hh /= kCon;
        a[0][i] = (fn(x + hh) - fn(x - hh)) / (2.0 * hh);
        double fac = kCon2;
        for (int j = 1; j <= i; ++j) {
            a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
            fac *= kCon2;
            double errt = std::max(std::abs(a[j][i] - a[j - 1][i]),
                                   std::abs(a[j][i] - a[j - 1][i - 1]));
            if (errt <= err) {
                err = errt;
                ans = a[j][i];
            }
        }
        if (std::abs(a[i][i] - a[i - 1][i - 1]) >= 2.0 * err) break;
    }
    return ans;
}

}  // namespace

double kernel_K(double rho, int n, double gamma) {
    if (!(rho > 0.0)) throw std::domain_error("kernel_K: rho must be positive");
    if (n < 3 || n % 2 == 0)
        throw std::invalid_argument("kernel_K: only odd n >= 3 is supported");
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::domain_error("kernel_K: gamma must lie in (0,1)");
    const double nu = 0.5 + gamma;
    const double c = 0.5 * (n - 1);
    const int applications = (n - 1) / 2;

    // First application, closed form: D[rho^{-nu} K_nu(c rho)] = -c rho^{-nu} K_{nu+1}(c rho) / sinh rho.
    // The sign is absorbed into C_n.
    std::function<double(double)> level = [nu, c](double r) {
        return c * std::pow(r, -nu) * bessel_k_pair(BesselOrder(nu), c * r).k_nu1 / std::sinh(r);
    };
    for (int k = 1; k < applications; ++k) {
        std::function<double(double)> prev = level;
        level = [prev](double r) {
            double h = 0.05 * std::min(r, 1.0);
            return -ridders_derivative(prev, r, h) / std::sinh(r);
        };
    }
    return level(rho);
}

KernelSamples sample_kernel(double rho_min, double rho_max, int count, int n, double gamma) {
    if (!(rho_min > 0.0) || !(rho_max > rho_min) || count < 2)
        throw std::invalid_argument("sample_kernel: need 0 < rho_min < rho_max and count >= 2");
    KernelSamples s;
    s.n = n;
    s.gamma = gamma;
    s.rho.resize(count);
    s.values.resize(count);
    const double lmin = std::log(rho_min);
    const double step = (std::log(rho_max) - lmin) / (count - 1);
    for (int k = 0; k < count; ++k) {
        s.rho[k] = k + 1 == count ? rho_max : std::exp(lmin + k * step);
        s.values[k] = kernel_K(s.rho[k], n, gamma);
    }
    return s;
}

LineFit fit_asymptotic_slopes(const KernelSamples& samples, FitWindow window, SlopeFit mode,
                              double rate) {
    if (samples.rho.size() != samples.values.size())
        throw std::invalid_argument("fit_asymptotic_slopes: size mismatch");
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < samples.rho.size(); ++k) {
        double r = samples.rho[k];
        if (r < window.lo || r > window.hi) continue;
        double v = std::abs(samples.values[k]);
        if (!(v > 0.0)) throw std::invalid_argument("fit_asymptotic_slopes: zero sample in window");
        double y = std::log(v);
        if (mode == SlopeFit::kCompensated) y += rate * r;
        xs.push_back(mode == SlopeFit::kExponential ? r : std::log(r));
        ys.push_back(y);
    }
    const auto m = static_cast<double>(xs.size());
    if (xs.size() < 8)
        throw std::invalid_argument("fit_asymptotic_slopes: window holds fewer than 8 samples");
    double xbar = 0, ybar = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        xbar += xs[k];
        ybar += ys[k];
    }
    xbar /= m;
    ybar /= m;
    double sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sxx += (xs[k] - xbar) * (xs[k] - xbar);
        sxy += (xs[k] - xbar) * (ys[k] - ybar);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("fit_asymptotic_slopes: degenerate window");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = ybar - fit.slope * xbar;
    return fit;
}

}  // namespace hyplayer
