#include <cmath>

#include "doctest.h"
#include "collapse/collapse_bounds.hpp"
#include "collapse/constants.hpp"
#include "support/oracles.hpp"

using namespace collapse;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Simple cubic lattice reproducing the silicon density.
Material silicon_lattice() {
  const double m_a = 28.0855 * constants::amu;
  const double a = std::cbrt(m_a / 2330.0);
  return Material(2330.0, Lattice{a, m_a});
}

}  // namespace

TEST_SUITE("collapse_bounds") {

TEST_CASE("thermal diffusion of the bar detector") {
  const auto osc = Oscillator::from_quality_factor(40.0, hz_to_rad_s(1.0), 25000, 300);
  const double oracle_dt = 2.0 * (2.0 * oracle::kPi / 25000.0) * 40.0 * oracle::kBoltzmann * 300.0;
  CHECK(rel(thermal_diffusion(osc), oracle_dt) < 1e-14);
  CHECK(rel(thermal_diffusion(osc), 8.32787857e-23) < 1e-8);
}

TEST_CASE("Lambda_T is the rate at which CSL diffusion equals thermal diffusion") {
  const auto osc = Oscillator::from_quality_factor(1e-9, hz_to_rad_s(1.0), 1e6, 1.0);
  for (double alpha : {1e20, 3.3e24, 1e30}) {
    for (double r : {1e-8, 1e-7, 1e-6}) {
      const double lt = thermal_bound(osc, alpha, r);
      CHECK(rel(csl_diffusion(lt, r, alpha), thermal_diffusion(osc)) < 1e-14);
      const double expected = 2 * r * r * osc.gamma() * oracle::kBoltzmann * osc.temperature() * osc.mass() /
                              (oracle::kHbar * oracle::kHbar * alpha);
      CHECK(rel(lt, expected) < 1e-14);
    }
  }
}

TEST_CASE("Lambda_T scales linearly in gamma, T and r^2") {
  const auto osc = Oscillator(1e-6, 10.0, 1e-4, 2.0);
  const double base = thermal_bound(osc, 1e25, 1e-7);
  CHECK(rel(thermal_bound(Oscillator(1e-6, 10.0, 3e-4, 2.0), 1e25, 1e-7), 3 * base) < 1e-14);
  CHECK(rel(thermal_bound(Oscillator(1e-6, 10.0, 1e-4, 5.0), 1e25, 1e-7), 2.5 * base) < 1e-14);
  CHECK(rel(thermal_bound(osc, 1e25, 2e-7), 4 * base) < 1e-14);
}

TEST_CASE("Lambda_SQL equates CSL diffusion and SQL noise") {
  const auto osc = Oscillator::from_quality_factor(1e-7, hz_to_rad_s(0.1), 1e6, 0.2);
  const double omega = hz_to_rad_s(100.0);
  const double chi = oracle::chi_abs(osc.mass(), osc.omega(), osc.gamma(), omega);
  const double ls = measurement_bound(osc, 2e27, 1e-7, omega, SusceptibilityMode::full_lorentzian);
  CHECK(rel(csl_diffusion(ls, 1e-7, 2e27), oracle::kHbar / chi) < 1e-13);
  CHECK(rel(inverse_susceptibility_magnitude(osc, omega), 1.0 / chi) < 1e-14);
}

TEST_CASE("free-mass mode") {
  const auto osc = Oscillator::from_quality_factor(1e-6, 1.0, 1e3, 1.0);
  CHECK_THROWS_AS(measurement_bound(osc, 1e25, 1e-7, 9.0, SusceptibilityMode::free_mass), ValidationError);
  const double free = measurement_bound(osc, 1e25, 1e-7, 10.0, SusceptibilityMode::free_mass);
  CHECK(rel(free, 1e-14 * 100.0 * 1e-6 / (oracle::kHbar * 1e25)) < 1e-14);
  // The modes converge as omega / Omega grows.
  for (double w : {1e2, 1e3, 1e4}) {
    const double full = measurement_bound(osc, 1e25, 1e-7, w, SusceptibilityMode::full_lorentzian);
    const double fm = measurement_bound(osc, 1e25, 1e-7, w, SusceptibilityMode::free_mass);
    CHECK(std::abs(full / fm - 1.0) < 2.0 / (w * w));
  }
}

TEST_CASE("on resonance the Lorentzian gives m Omega gamma") {
  const auto osc = Oscillator::from_quality_factor(48e-15, hz_to_rad_s(1.1e7), 3.3e5, 0.015);
  CHECK(rel(inverse_susceptibility_magnitude(osc, osc.omega()), osc.mass() * osc.omega() * osc.gamma()) < 1e-12);
}

TEST_CASE("mode names") {
  CHECK(parse_susceptibility_mode("free_mass") == SusceptibilityMode::free_mass);
  CHECK(to_string(SusceptibilityMode::full_lorentzian) == "full_lorentzian");
  CHECK_THROWS_AS(parse_susceptibility_mode("lorentz"), ValidationError);
}

TEST_CASE("DP lattice sum: closed form against numerical integral") {
  const auto mat = silicon_lattice();
  const double a = mat.require_lattice().constant;
  for (double f : {1.0 / 5.0, 1.0 / 10.0, 1.0 / 100.0}) {
    const double sigma = a * f;
    const double closed = dp_diffusion_lattice(mat, 1e-9, sigma);
    CHECK(rel(closed, oracle::dp_diffusion(2330.0, a, 1e-9, sigma)) < 1e-10);
    CHECK(rel(dp_diffusion_quadrature(mat, 1e-9, sigma), closed) < 1e-6);
  }
  CHECK_THROWS_AS(dp_diffusion_lattice(mat, 1e-9, a / 4), ValidationError);
  CHECK_THROWS_AS(dp_diffusion_lattice(Material(2330.0), 1e-9, 1e-12), ValidationError);
}

TEST_CASE("Sigma_DP solves D_DP = thermal plus free-mass SQL noise") {
  const auto mat = silicon_lattice();
  const double a = mat.require_lattice().constant;
  const auto osc = Oscillator::from_quality_factor(1e-9, hz_to_rad_s(1.0), 1e6, 1.0);
  for (double omega : {1.0, 1e2, 1e4}) {
    const double noise = osc.mass() * (oracle::kHbar * omega * omega + 2 * osc.gamma() * oracle::kBoltzmann * 1.0);
    const double root = oracle::bisect_log(
        [&](double s) { return oracle::dp_diffusion(2330.0, a, osc.mass(), s) - noise; }, 1e-20, 1e-3);
    CAPTURE(omega);
    CHECK(rel(dp_blur_bound(mat, osc, omega), root) < 1e-9);
  }
}

TEST_CASE("Sigma_DP is independent of mass") {
  const auto mat = silicon_lattice();
  const auto osc = Oscillator::from_quality_factor(1e-9, hz_to_rad_s(1.0), 1e6, 1.0);
  const double ref = dp_blur_bound(mat, osc, 100.0);
  for (double m : {1e-18, 1e-12, 3.7e-5, 40.0, 1e4}) CHECK(dp_blur_bound(mat, osc.with_mass(m), 100.0) == ref);
}

}  // TEST_SUITE
