#pragma once

namespace hyplayer {

/// Gamma(x) for x > 0 (Lanczos approximation, relative error ~1e-15 on (0, 10]).
double gamma_fn(double x);

/// Order of a modified Bessel function of the second kind. Only |nu| <= 3 is supported.
struct BesselOrder {
    double nu;
    explicit BesselOrder(double value);
};

/// K_nu(x) and K_{nu+1}(x) from one evaluation.
struct BesselKPair {
    double k_nu;
    double k_nu1;
};

/// Decaying modified Bessel solution K_nu(x), x > 0.
double bessel_k(BesselOrder order, double x);

/// K_nu(x) together with K_{nu+1}(x). Requires nu >= 0.
BesselKPair bessel_k_pair(BesselOrder order, double x);

/// Normalized extension profile 2^{1-gamma}/Gamma(gamma) s^gamma K_gamma(s), equal to 1 at s = 0.
///
/// It is the bounded decaying solution of phi'' + ((1 - 2 gamma)/s) phi' = phi with phi(0) = 1.
double phi_gamma(double s, double gamma);

/// Derivative of phi_gamma with respect to s (s > 0).
double phi_gamma_prime(double s, double gamma);

}  // namespace hyplayer
