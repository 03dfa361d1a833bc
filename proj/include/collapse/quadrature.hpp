#pragma once

#include <functional>

namespace collapse {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  bool converged = true;
  int panels = 0;
};

/// Integrates a non-negative, possibly oscillatory integrand over [0, upper]
/// by summing one 31-point Gauss-Kronrod rule per panel of width `panel_width`.
/// The error estimate is the sum of the per-panel Kronrod-Gauss differences;
/// the result is flagged as not converged when it exceeds rel_tol * value.
/// Integration stops early once `tail_bound(a)`, an upper bound on the
/// integral over [a, inf), falls below 1e-4 * rel_tol of the running sum.
/// Past `max_panels` the partial sum is returned flagged as not converged.
QuadratureResult integrate_panels(const std::function<double(double)>& integrand,
                                  double upper, double panel_width, double rel_tol,
                                  const std::function<double(double)>& tail_bound,
                                  int max_panels = 200000);

/// Bound on int_a^inf u^p exp(-u^2) du, valid for a >= 1 and small p.
double gaussian_tail_bound(double a, int power);

}  // namespace collapse
