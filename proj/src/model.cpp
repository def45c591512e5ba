#include "hyplayer/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hyplayer/specfun.hpp"

namespace hyplayer {

namespace {

constexpr double kWellTol = 1e-12;

void validate_potential(const Potential& p) {
    std::ostringstream err;
    if (std::abs(p.F(-1.0)) > kWellTol || std::abs(p.F(1.0)) > kWellTol)
        err << "F(+-1) must vanish; ";
    if (std::abs(p.f(-1.0)) > kWellTol || std::abs(p.f(1.0)) > kWellTol)
        err << "f(+-1) must vanish; ";
    // interior positivity on a dense sample
    constexpr int samples = 2001;
    for (int k = 1; k < samples - 1; ++k) {
        double s = -1.0 + 2.0 * k / (samples - 1);
        if (!(p.F(s) > 0.0)) {
            err << "F must be positive on (-1,1) (fails at s=" << s << "); ";
            break;
        }
    }
    auto [left, right] = p.second_derivatives_at_wells();
    if (!(left > 0.0) || !(right > 0.0))
        err << "wells must be nondegenerate: F''(-1)=" << left << ", F''(1)=" << right
            << " (need F''(+-1) > 0); ";
    std::string msg = err.str();
    if (!msg.empty())
        throw std::invalid_argument("potential '" + p.name() + "' rejected: " + msg.substr(0, msg.size() - 2));
}

}  // namespace

Potential::Potential(std::string name, Fn F, Fn f, Fn fprime)
    : name_(std::move(name)), F_(std::move(F)), f_(std::move(f)), fprime_(std::move(fprime)) {
    validate_potential(*this);
}

Potential quartic_potential() {
    return Potential(
        "quartic",
        [](double s) {
            double m = 1.0 - s * s;
            return 0.25 * m * m;
        },
        [](double s) { return s - s * s * s; },
        [](double s) { return 1.0 - 3.0 * s * s; });
}

Potential sine_potential() {
    using std::numbers::pi;
    return Potential(
        "sine",
        [](double s) { return (1.0 + std::cos(pi * s)) / (pi * pi); },
        [](double s) { return std::sin(pi * s) / pi; },
        [](double s) { return std::cos(pi * s); });
}

Potential potential_by_name(const std::string& name) {
    if (name == "quartic") return quartic_potential();
    if (name == "sine") return sine_potential();
    if (name == "flat") {
        return Potential(
            "flat",
            [](double s) {
                double m = 1.0 - s * s;
                return m * m * m * m / 8.0;
            },
            [](double s) {
                double m = 1.0 - s * s;
                return s * m * m * m;
            },
            [](double s) {
                double m = 1.0 - s * s;
                return m * m * m - 6.0 * s * s * m * m;
            });
    }
    throw std::invalid_argument("unknown potential '" + name + "'");
}

ModelParams::ModelParams(int n, double gamma, double mu, Potential potential)
    : n_(n), gamma_(gamma), mu_(mu),
      potential_(std::make_shared<const Potential>(std::move(potential))) {
    if (n_ < 2) throw std::invalid_argument("dimension n must be >= 2");
    if (!(gamma_ > 0.0 && gamma_ < 1.0))
        throw std::invalid_argument("gamma must lie in (0,1), got " + std::to_string(gamma_));
    if (!(mu_ > n_ - 1))
        throw std::invalid_argument("comparison slope must satisfy μ > n − 1 (mu > n - 1; got mu=" +
                                    std::to_string(mu_) + ", n=" + std::to_string(n_) + ")");
}

ModelParams ModelParams::with_gamma(double gamma) const {
    ModelParams out = *this;
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("gamma must lie in (0,1), got " + std::to_string(gamma));
    out.gamma_ = gamma;
    return out;
}

ModelParams ModelParams::with_n(int n) const {
    if (n < 2) throw std::invalid_argument("dimension n must be >= 2");
    ModelParams out = *this;
    out.n_ = n;
    if (!(out.mu_ > n - 1)) out.mu_ = n;
    return out;
}

double d_gamma(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::domain_error("d_gamma: gamma must lie in (0,1)");
    return std::exp2(2.0 * gamma - 1.0) * gamma_fn(gamma) / gamma_fn(1.0 - gamma);
}

double multiplier(double lambda, int n, double gamma) {
    double base = lambda * lambda + 0.25 * (n - 1) * (n - 1);
    return std::pow(base, gamma);
}

}  // namespace hyplayer
