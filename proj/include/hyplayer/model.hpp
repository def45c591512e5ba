#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>

namespace hyplayer {

/// Double-well potential F with nonlinearity f = -F'. Wells are normalized to +-1.
///
/// Instances are validated on construction: F(+-1) = 0, f(+-1) = 0, F > 0 on (-1, 1)
/// and F''(+-1) > 0. A potential that fails any of these throws std::invalid_argument.
class Potential {
public:
    using Fn = std::function<double(double)>;

    Potential(std::string name, Fn F, Fn f, Fn fprime);

    const std::string& name() const { return name_; }

    double F(double s) const { return F_(s); }
    double f(double s) const { return f_(s); }
    /// Derivative of f, i.e. -F''.
    double fprime(double s) const { return fprime_(s); }
    double F_second(double s) const { return -fprime_(s); }

    /// F''(-1), F''(1).
    std::pair<double, double> second_derivatives_at_wells() const {
        return {F_second(-1.0), F_second(1.0)};
    }

private:
    std::string name_;
    Fn F_, f_, fprime_;
};

/// F(s) = (1 - s^2)^2 / 4, f(s) = s - s^3.
Potential quartic_potential();

/// F(s) = (1 + cos(pi s)) / pi^2, f(s) = sin(pi s) / pi.
Potential sine_potential();

/// Looks up a registered potential by name ("quartic", "sine", "flat").
/// "flat" is (1 - s^2)^4 / 8, whose wells are degenerate; looking it up throws.
Potential potential_by_name(const std::string& name);

/// Problem parameters. The weight exponent a = 1 - 2 gamma is derived, never stored
/// independently.
class ModelParams {
public:
    ModelParams(int n, double gamma, double mu, Potential potential);

    int n() const { return n_; }
    double gamma() const { return gamma_; }
    double a() const { return 1.0 - 2.0 * gamma_; }
    double mu() const { return mu_; }
    const Potential& potential() const { return *potential_; }
    const std::shared_ptr<const Potential>& potential_ptr() const { return potential_; }

    /// Copy with a different fractional order.
    ModelParams with_gamma(double gamma) const;
    /// Copy with a different dimension; mu is raised to n if it would violate mu > n - 1.
    ModelParams with_n(int n) const;

private:
    int n_;
    double gamma_;
    double mu_;
    std::shared_ptr<const Potential> potential_;
};

/// Extension constant d_gamma = 2^{2 gamma - 1} Gamma(gamma) / Gamma(1 - gamma).
double d_gamma(double gamma);

/// Spectral symbol (lambda^2 + (n-1)^2/4)^gamma of the fractional Laplacian on H^n.
double multiplier(double lambda, int n, double gamma);

}  // namespace hyplayer
