#pragma once

#include <utility>
#include <vector>

namespace hyplayer {

/// Jump kernel K_gamma(rho) of the fractional Laplacian on H^n, odd n >= 3.
///
/// The normalization constant is fixed so that the kernel is positive: C_n = (-1)^{(n-1)/2}.
/// For n = 3 the derivative (d/drho / sinh rho) is applied in closed form via
/// (z^{-v} K_v(z))' = -z^{-v} K_{v+1}(z); for n >= 5 the remaining applications use
/// Richardson-extrapolated central differences.
double kernel_K(double rho, int n, double gamma);

/// Kernel values on an ascending grid of geodesic distances.
struct KernelSamples {
    std::vector<double> rho;
    std::vector<double> values;
    int n = 3;
    double gamma = 0.5;
};

/// Log-spaced samples on [rho_min, rho_max].
KernelSamples sample_kernel(double rho_min, double rho_max, int count, int n, double gamma);

enum class SlopeFit {
    kPowerLaw,     ///< log|K| against log rho
    kExponential,  ///< log|K| against rho
    kCompensated,  ///< log|K| + rate * rho against log rho
};

struct FitWindow {
    double lo;
    double hi;
};

struct LineFit {
    double slope;
    double intercept;
};

/// Least-squares line through the samples with rho in [window.lo, window.hi].
/// Throws std::invalid_argument when the window holds fewer than 8 samples.
LineFit fit_asymptotic_slopes(const KernelSamples& samples, FitWindow window,
                              SlopeFit mode = SlopeFit::kPowerLaw, double rate = 0.0);

}  // namespace hyplayer
