#pragma once

namespace collapse {

/// sin(x)/x, with sinc(0) = 1 (unnormalized convention).
double sinc(double x);

/// 2 J_1(x) / x, the normalized transverse form factor of a disc; 1 at x = 0.
double disc_amplitude(double x);

/// 3 (sin x - x cos x) / x^3, the normalized form factor of a sphere; 1 at x = 0.
double sphere_amplitude(double x);

/// Exponentially scaled modified Bessel functions e^{-x} I_0(x), e^{-x} I_1(x)
/// for x >= 0. Finite for all x; no overflow for large arguments.
struct ScaledBesselI01 {
  double i0;
  double i1;
};
ScaledBesselI01 scaled_bessel_i01(double x);

/// Gamma_1(xi) = (2/xi^2) [exp(-xi^2/2) - 1 + sqrt(pi/2) xi erf(xi/sqrt 2)].
/// Continuous at 0 with Gamma_1(0) = 1; strictly decreasing; requires xi >= 0.
double gamma_one(double xi);

/// Gamma_perp(xi) = (2/xi^2) {1 - exp(-xi^2) [I_0(xi^2) + I_1(xi^2)]}.
/// Continuous at 0 with Gamma_perp(0) = 1; requires xi >= 0.
double gamma_perp(double xi);

}  // namespace collapse
