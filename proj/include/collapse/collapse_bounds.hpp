#pragma once

#include <string>

#include "collapse/core_model.hpp"

namespace collapse {

enum class SusceptibilityMode { full_lorentzian, free_mass };

std::string to_string(SusceptibilityMode mode);
SusceptibilityMode parse_susceptibility_mode(const std::string& name);

/// Momentum diffusion constants, all in N^2 s.
struct NoiseBudget {
  double d_csl = 0.0;
  double d_thermal = 0.0;
  double d_dp = 0.0;
  std::string csl_label;
  std::string thermal_label;
  std::string dp_label;
};

/// Detectability thresholds at one measurement frequency.
struct BoundReport {
  double lambda_thermal = 0.0;      // Lambda_T (1/s)
  double lambda_measurement = 0.0;  // Lambda_SQL (1/s)
  double sigma_dp = 0.0;            // Sigma_DP (m); 0 when no lattice data
  double omega = 0.0;               // measurement frequency (rad/s)
  SusceptibilityMode mode = SusceptibilityMode::full_lorentzian;
};

/// D_CSL = lambda (hbar / r_CSL)^2 alpha.
double csl_diffusion(double lambda_csl, double r_csl, double alpha);

/// D_T = 2 gamma m k_B T.
double thermal_diffusion(const Oscillator& oscillator);

/// 1 / |chi(omega)| = m sqrt((Omega^2 - omega^2)^2 + omega^2 gamma^2).
double inverse_susceptibility_magnitude(const Oscillator& oscillator, double omega);

/// Lambda_T = 2 r^2 gamma k_B T m / (hbar^2 alpha): the rate at which D_CSL = D_T.
double thermal_bound(const Oscillator& oscillator, double alpha, double r_csl);

/// Lambda_SQL: the rate at which D_CSL equals the SQL measurement noise
/// hbar / |chi(omega)|. The free-mass mode uses |chi|^{-1} = m omega^2 and
/// requires omega >= 10 Omega.
double measurement_bound(const Oscillator& oscillator, double alpha, double r_csl,
                         double omega, SusceptibilityMode mode);

/// D_DP = (G hbar / 6 sqrt(pi)) (a / sigma)^3 rho m for a monoatomic cubic
/// lattice. Requires sigma <= a / 5.
double dp_diffusion_lattice(const Material& material, double mass, double sigma_dp);

/// Same quantity with the Gaussian lattice-sum integral evaluated numerically.
double dp_diffusion_quadrature(const Material& material, double mass, double sigma_dp,
                               double rel_tol = 1e-10);

/// Sigma_DP = [G hbar rho / (6 sqrt(pi) (hbar omega^2 + 2 gamma k_B T))]^{1/3} a.
/// Mass independent.
double dp_blur_bound(const Material& material, const Oscillator& oscillator, double omega);

}  // namespace collapse
