#include "collapse/collapse_bounds.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

namespace collapse {

namespace {

void require_alpha(double alpha) {
  if (!std::isfinite(alpha) || alpha <= 0.0) {
    throw ValidationError(fmt::format("geometry factor alpha must be > 0, got {}", alpha));
  }
}

void require_omega(double omega) {
  if (!std::isfinite(omega) || omega <= 0.0) {
    throw ValidationError(fmt::format("measurement frequency must be > 0, got {}", omega));
  }
}

void require_dp_regime(const Lattice& lattice, double sigma_dp) {
  if (!std::isfinite(sigma_dp) || sigma_dp <= 0.0) {
    throw ValidationError(fmt::format("sigma_DP must be > 0, got {}", sigma_dp));
  }
  if (sigma_dp > lattice.constant / 5.0) {
    throw ValidationError(fmt::format(
        "sigma_DP = {:.3g} m exceeds a/5 = {:.3g} m; the lattice result needs sigma_DP << a",
        sigma_dp, lattice.constant / 5.0));
  }
}

}  // namespace

std::string to_string(SusceptibilityMode mode) {
  return mode == SusceptibilityMode::free_mass ? "free_mass" : "full_lorentzian";
}

SusceptibilityMode parse_susceptibility_mode(const std::string& name) {
  if (name == "full_lorentzian") return SusceptibilityMode::full_lorentzian;
  if (name == "free_mass") return SusceptibilityMode::free_mass;
  throw ValidationError(fmt::format("unknown susceptibility mode '{}' (expected full_lorentzian or free_mass)", name));
}

double csl_diffusion(double lambda_csl, double r_csl, double alpha) {
  if (lambda_csl < 0.0 || r_csl <= 0.0 || alpha < 0.0) {
    throw ValidationError("csl_diffusion: inputs must be non-negative and r_CSL > 0");
  }
  const double q = constants::hbar / r_csl;
  return lambda_csl * q * q * alpha;
}

double thermal_diffusion(const Oscillator& oscillator) {
  return 2.0 * oscillator.gamma() * oscillator.mass() * constants::k_B * oscillator.temperature();
}

double inverse_susceptibility_magnitude(const Oscillator& oscillator, double omega) {
  const double detuning = oscillator.omega() * oscillator.omega() - omega * omega;
  return oscillator.mass() * std::hypot(detuning, omega * oscillator.gamma());
}

double thermal_bound(const Oscillator& oscillator, double alpha, double r_csl) {
  require_alpha(alpha);
  // Written as D_T / (hbar / r)^2 / alpha so that csl_diffusion(bound) == D_T.
  const double q = constants::hbar / r_csl;
  return thermal_diffusion(oscillator) / (q * q) / alpha;
}

double measurement_bound(const Oscillator& oscillator, double alpha, double r_csl,
                         double omega, SusceptibilityMode mode) {
  require_alpha(alpha);
  require_omega(omega);
  double inverse_chi = 0.0;
  if (mode == SusceptibilityMode::free_mass) {
    if (omega < 10.0 * oscillator.omega()) {
      throw ValidationError(fmt::format(
          "free-mass susceptibility needs omega >= 10 Omega (omega = {:.4g}, Omega = {:.4g} rad/s); "
          "use full_lorentzian",
          omega, oscillator.omega()));
    }
    inverse_chi = oscillator.mass() * omega * omega;
  } else {
    inverse_chi = inverse_susceptibility_magnitude(oscillator, omega);
  }
  const double q = constants::hbar / r_csl;
  return constants::hbar * inverse_chi / (q * q) / alpha;
}

double dp_diffusion_lattice(const Material& material, double mass, double sigma_dp) {
  const auto& lattice = material.require_lattice();
  require_dp_regime(lattice, sigma_dp);
  const double ratio = lattice.constant / sigma_dp;
  return constants::G * constants::hbar / (6.0 * std::sqrt(std::numbers::pi)) * ratio * ratio * ratio *
         material.density() * mass;
}

double dp_diffusion_quadrature(const Material& material, double mass, double sigma_dp,
                               double rel_tol) {
  using boost::math::quadrature::gauss_kronrod;
  const auto& lattice = material.require_lattice();
  require_dp_regime(lattice, sigma_dp);
  const double a3 = lattice.constant * lattice.constant * lattice.constant;
  const double volume = mass / material.density();
  // int d^3q exp(-sigma^2 q^2) as a radial integral in s = sigma q.
  auto radial = [](double s) { return 4.0 * std::numbers::pi * s * s * std::exp(-s * s); };
  double error = 0.0;
  const double integral =
      gauss_kronrod<double, 61>::integrate(radial, 0.0, std::numeric_limits<double>::infinity(), 15,
                                           rel_tol, &error) /
      (sigma_dp * sigma_dp * sigma_dp);
  const double prefactor = constants::G * constants::hbar * lattice.nuclear_mass * lattice.nuclear_mass *
                           volume / (6.0 * std::numbers::pi * std::numbers::pi * a3);
  const double value = prefactor * integral;
  if (!(error <= rel_tol * integral * sigma_dp * sigma_dp * sigma_dp)) {
    throw NumericalError("DP lattice integral did not converge", value);
  }
  return value;
}

double dp_blur_bound(const Material& material, const Oscillator& oscillator, double omega) {
  require_omega(omega);
  const auto& lattice = material.require_lattice();
  const double noise = constants::hbar * omega * omega +
                       2.0 * oscillator.gamma() * constants::k_B * oscillator.temperature();
  return std::cbrt(constants::G * constants::hbar * material.density() /
                   (6.0 * std::sqrt(std::numbers::pi) * noise)) *
         lattice.constant;
}

}  // namespace collapse
