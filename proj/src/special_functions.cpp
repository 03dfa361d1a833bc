#include "collapse/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>
#include <fmt/format.h>

#include "collapse/errors.hpp"

namespace collapse {

namespace {

constexpr double kSeriesThreshold = 1e-4;

void require_nonnegative(double xi, const char* name) {
  if (std::isnan(xi) || xi < 0.0) {
    throw ValidationError(fmt::format("{} requires a non-negative argument, got {}", name, xi));
  }
}

// Taylor coefficients c_n of e^{-t} I_1(t) / t, from the Cauchy product of
// e^{-t} and I_1(t)/t = sum_k t^{2k} / (2^{2k+1} k! (k+1)!).
constexpr int kPerpSeriesTerms = 48;

std::array<double, kPerpSeriesTerms> perp_series_coefficients() {
  std::array<double, kPerpSeriesTerms> exp_coef{};
  std::array<double, kPerpSeriesTerms> i1_coef{};
  double f = 1.0;
  for (int j = 0; j < kPerpSeriesTerms; ++j) {
    if (j > 0) f *= j;
    exp_coef[j] = ((j % 2 == 0) ? 1.0 : -1.0) / f;
  }
  for (int k = 0; 2 * k < kPerpSeriesTerms; ++k) {
    double denom = 2.0;
    for (int i = 1; i <= k; ++i) denom *= 4.0 * i * (i + 1);
    i1_coef[2 * k] = 1.0 / denom;
  }
  std::array<double, kPerpSeriesTerms> out{};
  for (int n = 0; n < kPerpSeriesTerms; ++n) {
    double s = 0.0;
    for (int j = 0; j <= n; ++j) s += exp_coef[j] * i1_coef[n - j];
    out[n] = s;
  }
  return out;
}

}  // namespace

double sinc(double x) {
  if (std::abs(x) < kSeriesThreshold) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
  }
  return std::sin(x) / x;
}

double disc_amplitude(double x) {
  if (std::abs(x) < kSeriesThreshold) {
    const double x2 = x * x;
    return 1.0 - x2 / 8.0 * (1.0 - x2 / 24.0 * (1.0 - x2 / 48.0));
  }
  return 2.0 * boost::math::cyl_bessel_j(1, std::abs(x)) / std::abs(x);
}

double sphere_amplitude(double x) {
  // sin x - x cos x cancels to O(x^3); the series is used well above the
  // 1e-4 threshold to keep full relative precision.
  const double ax = std::abs(x);
  if (ax < 0.5) {
    // 3 sum_{n>=1} (-1)^{n+1} 2n x^{2n-2} / (2n+1)!
    const double x2 = x * x;
    double term = 1.0;  // n = 1 term
    double sum = term;
    for (int n = 2; n < 12; ++n) {
      // ratio of consecutive terms: -x^2 * n / (n - 1) / ((2n)(2n+1))
      term *= -x2 * static_cast<double>(n) / static_cast<double>(n - 1) /
              (2.0 * n * (2.0 * n + 1.0));
      sum += term;
    }
    return sum;
  }
  return 3.0 * (std::sin(ax) - ax * std::cos(ax)) / (ax * ax * ax);
}

ScaledBesselI01 scaled_bessel_i01(double x) {
  require_nonnegative(x, "scaled_bessel_i01");
  if (std::isinf(x)) return {0.0, 0.0};
  if (x <= 50.0) {
    // Power series; all terms positive.
    const double h = 0.5 * x;
    const double h2 = h * h;
    double t0 = 1.0;
    double t1 = h;
    double s0 = t0;
    double s1 = t1;
    for (int k = 1; k < 500; ++k) {
      t0 *= h2 / (static_cast<double>(k) * k);
      t1 *= h2 / (static_cast<double>(k) * (k + 1));
      s0 += t0;
      s1 += t1;
      if (t0 < 1e-17 * s0 && t1 < 1e-17 * s1) break;
    }
    const double e = std::exp(-x);
    return {s0 * e, s1 * e};
  }
  // Hankel asymptotic expansion:
  // e^{-x} I_nu(x) ~ (2 pi x)^{-1/2} sum_k (-1)^k a_k(nu) / x^k.
  auto scaled = [x](double nu) {
    const double mu = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    double previous = 1.0;
    for (int k = 1; k < 60; ++k) {
      const double odd = 2.0 * k - 1.0;
      term *= -(mu - odd * odd) / (k * 8.0 * x);
      if (std::abs(term) > std::abs(previous)) break;
      sum += term;
      previous = term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * x);
  };
  return {scaled(0.0), scaled(1.0)};
}

double gamma_one(double xi) {
  require_nonnegative(xi, "gamma_one");
  if (std::isinf(xi)) return 0.0;
  const double u = 0.5 * xi * xi;
  if (u < 1.0) {
    // sum_n (-1)^n u^n / ((n+1)! (2n+1))
    double power = 1.0;  // (-u)^n / (n+1)!
    double sum = 1.0;
    for (int n = 1; n < 40; ++n) {
      power *= -u / (n + 1.0);
      const double term = power / (2.0 * n + 1.0);
      sum += term;
      if (std::abs(term) < 1e-18) break;
    }
    return sum;
  }
  const double bracket = std::exp(-u) - 1.0 +
                         std::sqrt(0.5 * std::numbers::pi) * xi * std::erf(xi / std::numbers::sqrt2);
  return bracket / u;
}

double gamma_perp(double xi) {
  require_nonnegative(xi, "gamma_perp");
  if (std::isinf(xi)) return 0.0;
  const double x = xi * xi;
  if (x < 2.0) {
    // 1 - e^{-x}(I_0 + I_1) = int_0^x e^{-t} I_1(t)/t dt, integrated termwise.
    static const auto coef = perp_series_coefficients();
    double sum = 0.0;
    double power = 1.0;
    for (int n = 0; n < kPerpSeriesTerms; ++n) {
      const double term = coef[n] * power / (n + 1.0);
      sum += term;
      if (n > 4 && std::abs(term) < 1e-18 * std::abs(sum)) break;
      power *= x;
    }
    return 2.0 * sum;
  }
  const auto bessel = scaled_bessel_i01(x);
  return 2.0 / x * (1.0 - (bessel.i0 + bessel.i1));
}

}  // namespace collapse
