#pragma once

#include <functional>
#include <vector>

namespace hyplayer {

/// Radial function on H^3 sampled on the uniform grid rho_j = j h, j = 0..N, h = L/N.
///
/// The function is understood to be extended evenly through rho = 0.
struct RadialFn {
    double L = 30.0;
    std::vector<double> samples;
    /// Set by the transforms when the input has not decayed below the floor near rho = L.
    bool insufficient_decay = false;

    int intervals() const { return static_cast<int>(samples.size()) - 1; }
    double step() const { return L / intervals(); }
    double rho(int j) const { return j * step(); }

    static RadialFn sample(const std::function<double(double)>& fn, double L, int intervals);
};

/// Default decay floor for radial inputs.
inline constexpr double kRadialDecayFloor = 1e-10;

/// (-Delta_{H^3})^gamma on radial functions through the sinh substitution.
///
/// With v = sinh(rho) w one has -Delta w = (-v'' + v) / sinh(rho), so the operator is
/// (1 - d^2/drho^2)^gamma applied to v with homogeneous Dirichlet modes on [0, L]
/// (a discrete sine transform), divided by sinh(rho). The value at rho = 0 is the
/// limit v_out'(0). Requires gamma in (0, 1].
RadialFn frac_laplacian_radial_h3(const RadialFn& w, double gamma,
                                  double decay_floor = kRadialDecayFloor);

/// Reference Dirichlet-to-Neumann value for the extension solver; same as
/// frac_laplacian_radial_h3.
RadialFn dtn_spectral_reference(const RadialFn& w, double gamma,
                                double decay_floor = kRadialDecayFloor);

/// C-infinity bump exp(1 - 1/(1 - (rho/radius)^2)) supported in rho < radius; equals 1 at 0.
double smooth_bump(double rho, double radius);

}  // namespace hyplayer
