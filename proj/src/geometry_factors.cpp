#include "collapse/geometry_factors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "collapse/quadrature.hpp"
#include "collapse/special_functions.hpp"

namespace collapse {

namespace {

constexpr double kAsymptoticGuard = 5.0;
// Gaussian weight e^{-(k r)^2} < e^{-1600} beyond k r = 40.
constexpr double kTruncation = 40.0;

void require_mass(double mass) {
  if (!std::isfinite(mass) || mass <= 0.0) {
    throw ValidationError(fmt::format("mass must be finite and > 0, got {}", mass));
  }
}

void require_rcsl(double r_csl) {
  if (!std::isfinite(r_csl) || r_csl <= 0.0) {
    throw ValidationError(fmt::format("r_CSL must be finite and > 0, got {}", r_csl));
  }
}

// [1 - exp(-y)] / (2y) with y = b^2 / (4 r^2); tends to 1/2 for thin bodies.
double axial_factor(double length, double r_csl) {
  const double y = length * length / (4.0 * r_csl * r_csl);
  if (y < 1e-8) return 0.5 * (1.0 - 0.5 * y);
  return -std::expm1(-y) / (2.0 * y);
}

// 3 sum_{n>=3} (-1)^{n+1} (n-2) y^{n-3} / n!, the sphere bracket times 6/y^3.
double sphere_factor(double y) {
  if (y < 2.0) {
    double sum = 0.0;
    double power = 1.0;  // y^{n-3}
    double factorial = 6.0;  // n!
    for (int n = 3; n < 40; ++n) {
      const double term = ((n % 2 == 1) ? 1.0 : -1.0) * (n - 2) * power / factorial;
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
      power *= y;
      factorial *= n + 1;
    }
    return 3.0 * sum;
  }
  const double e = std::exp(-y);
  return (e - 1.0 + 0.5 * y * (e + 1.0)) * 6.0 / (y * y * y);
}

struct Factor {
  double value;
  double rel_error;
  bool converged;
};

Factor integrate_factor(const std::function<double(double)>& f, double scale,
                        int tail_power, double rel_tol) {
  // Panels resolve both the Gaussian (width ~1) and the form-factor
  // oscillations (period ~ 2 pi / scale in u = k r).
  const double panel = std::min(0.5, std::numbers::pi / std::max(scale, 1e-300));
  const auto result = integrate_panels(
      f, kTruncation, panel, rel_tol,
      [tail_power](double a) { return gaussian_tail_bound(a, tail_power); });
  return {result.value, result.value > 0.0 ? result.abs_error / result.value : 1.0,
          result.converged};
}

// In u = k r units; even integrands are integrated over [0, inf) and doubled.
Factor axial_integral(double beta, double rel_tol) {
  auto f = [beta](double u) {
    const double s = sinc(0.5 * u * beta);
    return 2.0 * u * u * std::exp(-u * u) * s * s;
  };
  return integrate_factor(f, beta, 2, rel_tol);
}

Factor transverse_axis_integral(double beta, double rel_tol) {
  auto f = [beta](double u) {
    const double s = sinc(0.5 * u * beta);
    return 2.0 * std::exp(-u * u) * s * s;
  };
  return integrate_factor(f, beta, 0, rel_tol);
}

Factor transverse_disc_integral(double rho, double rel_tol) {
  auto f = [rho](double u) {
    const double a = disc_amplitude(u * rho);
    return 2.0 * std::numbers::pi * u * std::exp(-u * u) * a * a;
  };
  return integrate_factor(f, rho, 1, rel_tol);
}

Factor radial_integral(double rho, double rel_tol) {
  auto f = [rho](double u) {
    const double a = sphere_amplitude(u * rho);
    const double u2 = u * u;
    return 4.0 * std::numbers::pi / 3.0 * u2 * u2 * std::exp(-u2) * a * a;
  };
  return integrate_factor(f, rho, 4, rel_tol);
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string to_string(AlphaMethod method) {
  switch (method) {
    case AlphaMethod::exact: return "exact";
    case AlphaMethod::asymptotic: return "asymptotic";
    case AlphaMethod::quadrature: return "quadrature";
  }
  return "unknown";
}

AlphaMethod parse_alpha_method(const std::string& name) {
  if (name == "exact") return AlphaMethod::exact;
  if (name == "asymptotic") return AlphaMethod::asymptotic;
  if (name == "quadrature") return AlphaMethod::quadrature;
  throw ValidationError(fmt::format("unknown alpha method '{}' (expected exact, asymptotic or quadrature)", name));
}

double form_factor(const Geometry& geometry, double mass, const std::array<double, 3>& k) {
  for (double component : k) {
    if (!std::isfinite(component)) throw ValidationError("form_factor: wave vector has non-finite components");
  }
  const double k_perp = std::hypot(k[1], k[2]);
  const double k_norm = std::hypot(k[0], k_perp);
  const double amplitude = std::visit(
      overloaded{
          [&](const Cuboid& c) {
            return sinc(0.5 * k[0] * c.b_x) * sinc(0.5 * k[1] * c.b_y) * sinc(0.5 * k[2] * c.b_z);
          },
          [&](const Disc& d) { return disc_amplitude(k_perp * d.radius) * sinc(0.5 * k[0] * d.thickness); },
          [&](const Sphere& s) { return sphere_amplitude(k_norm * s.radius); },
          [](const PointMass&) { return 1.0; },
      },
      geometry.shape());
  return mass * std::abs(amplitude);
}

double alpha_point_limit(double mass) {
  const double n = mass / constants::amu;
  return 0.5 * n * n;
}

AlphaResult alpha_exact(const Geometry& geometry, double mass, double r_csl) {
  require_mass(mass);
  require_rcsl(r_csl);
  const double n = mass / constants::amu;
  const double n2 = n * n;
  const double root2r = std::numbers::sqrt2 * r_csl;
  const double alpha = std::visit(
      overloaded{
          [&](const Cuboid& c) {
            return n2 * gamma_one(c.b_y / root2r) * gamma_one(c.b_z / root2r) *
                   axial_factor(c.b_x, r_csl);
          },
          [&](const Disc& d) {
            return n2 * gamma_perp(d.radius / root2r) * axial_factor(d.thickness, r_csl);
          },
          [&](const Sphere& s) {
            return n2 * sphere_factor(s.radius * s.radius / (r_csl * r_csl));
          },
          [&](const PointMass&) { return 0.5 * n2; },
      },
      geometry.shape());
  return {alpha, AlphaMethod::exact, 0.0};
}

bool asymptotic_regime(const Geometry& geometry, double r_csl) {
  return std::visit(
      overloaded{
          [&](const Cuboid& c) {
            return c.b_x == c.b_y && c.b_y == c.b_z && c.b_x >= kAsymptoticGuard * r_csl;
          },
          [&](const Disc& d) {
            return d.thickness <= r_csl / kAsymptoticGuard && d.radius >= kAsymptoticGuard * r_csl;
          },
          [&](const Sphere& s) { return s.radius >= kAsymptoticGuard * r_csl; },
          [](const PointMass&) { return false; },
      },
      geometry.shape());
}

AlphaResult alpha_asymptotic(const Geometry& geometry, double mass, double r_csl) {
  require_mass(mass);
  require_rcsl(r_csl);
  if (!asymptotic_regime(geometry, r_csl)) {
    throw ValidationError(fmt::format(
        "{} is outside the asymptotic regime for r_CSL = {:.3g} m (needs cube/sphere size >= {}*r_CSL, "
        "or disc thickness <= r_CSL/{} and radius >= {}*r_CSL); use the exact method",
        geometry.describe(), r_csl, kAsymptoticGuard, kAsymptoticGuard, kAsymptoticGuard));
  }
  const double rho = mass / geometry.volume();
  const double amu2 = constants::amu * constants::amu;
  const double r2 = r_csl * r_csl;
  const double pi = std::numbers::pi;
  const double alpha = std::visit(
      overloaded{
          [&](const Cuboid& c) { return 8.0 * pi * rho * rho * r2 * r2 * c.b_x * c.b_x / amu2; },
          [&](const Disc& d) {
            return 2.0 * pi * pi * rho * rho * r2 * d.thickness * d.thickness * d.radius * d.radius / amu2;
          },
          [&](const Sphere& s) { return 16.0 * pi * pi * rho * rho * r2 * r2 * s.radius * s.radius / (3.0 * amu2); },
          [](const PointMass&) { return 0.0; },
      },
      geometry.shape());
  return {alpha, AlphaMethod::asymptotic, 0.0};
}

AlphaResult alpha_quadrature(const Geometry& geometry, double mass, double r_csl, double rel_tol) {
  require_mass(mass);
  require_rcsl(r_csl);
  if (!(rel_tol >= 1e-12 && rel_tol <= 1e-3)) {
    throw ValidationError(fmt::format("rel_tol must lie in [1e-12, 1e-3], got {}", rel_tol));
  }
  const double n = mass / constants::amu;
  const double prefactor = n * n / std::pow(std::numbers::pi, 1.5);

  std::vector<Factor> factors;
  const double tol = rel_tol / 4.0;
  std::visit(overloaded{
                 [&](const Cuboid& c) {
                   factors.push_back(axial_integral(c.b_x / r_csl, tol));
                   factors.push_back(transverse_axis_integral(c.b_y / r_csl, tol));
                   factors.push_back(transverse_axis_integral(c.b_z / r_csl, tol));
                 },
                 [&](const Disc& d) {
                   factors.push_back(axial_integral(d.thickness / r_csl, tol));
                   factors.push_back(transverse_disc_integral(d.radius / r_csl, tol));
                 },
                 [&](const Sphere& s) { factors.push_back(radial_integral(s.radius / r_csl, tol)); },
                 [&](const PointMass&) { factors.push_back(radial_integral(0.0, tol)); },
             },
             geometry.shape());

  double alpha = prefactor;
  double rel_error = 0.0;
  bool converged = true;
  for (const auto& f : factors) {
    alpha *= f.value;
    rel_error += f.rel_error;
    converged = converged && f.converged;
  }
  if (!converged || rel_error > rel_tol) {
    throw NumericalError(
        fmt::format("alpha quadrature for {} did not reach rel_tol {:.1e} (estimated {:.1e})",
                    geometry.describe(), rel_tol, rel_error),
        alpha);
  }
  return {alpha, AlphaMethod::quadrature, rel_error};
}

AlphaResult compute_alpha(AlphaMethod method, const Geometry& geometry, double mass, double r_csl) {
  switch (method) {
    case AlphaMethod::exact: return alpha_exact(geometry, mass, r_csl);
    case AlphaMethod::asymptotic: return alpha_asymptotic(geometry, mass, r_csl);
    case AlphaMethod::quadrature: return alpha_quadrature(geometry, mass, r_csl);
  }
  throw ValidationError("unknown alpha method");
}

}  // namespace collapse
