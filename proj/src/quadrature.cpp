#include "collapse/quadrature.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace collapse {

QuadratureResult integrate_panels(const std::function<double(double)>& integrand,
                                  double upper, double panel_width, double rel_tol,
                                  const std::function<double(double)>& tail_bound,
                                  int max_panels) {
  using boost::math::quadrature::gauss_kronrod;
  QuadratureResult result;
  for (double a = 0.0; a < upper; a += panel_width) {
    if (result.value > 0.0 && tail_bound(a) < 1e-4 * rel_tol * result.value) break;
    if (result.panels >= max_panels) {
      result.converged = false;
      break;
    }
    const double b = std::min(a + panel_width, upper);
    double error = 0.0;
    const double piece = gauss_kronrod<double, 31>::integrate(integrand, a, b, 0, 0.0, &error);
    result.value += piece;
    result.abs_error += error;
    ++result.panels;
  }
  if (result.abs_error > rel_tol * result.value) result.converged = false;
  return result;
}

double gaussian_tail_bound(double a, int power) {
  if (a < 1.0) return INFINITY;
  return (1.0 + std::pow(a, power)) * std::exp(-a * a);
}

}  // namespace collapse
