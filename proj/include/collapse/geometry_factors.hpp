#pragma once

#include <array>
#include <string>

#include "collapse/core_model.hpp"

namespace collapse {

enum class AlphaMethod { exact, asymptotic, quadrature };

std::string to_string(AlphaMethod method);
AlphaMethod parse_alpha_method(const std::string& name);

/// Dimensionless CSL geometry factor alpha together with how it was obtained.
struct AlphaResult {
  double alpha = 0.0;
  AlphaMethod method = AlphaMethod::exact;
  double estimated_relative_error = 0.0;  // quadrature only
};

/// |rho~(k)| in kg for a homogeneous body of total mass `mass`.
double form_factor(const Geometry& geometry, double mass, const std::array<double, 3>& k);

/// Point-mass supremum (m/amu)^2 / 2.
double alpha_point_limit(double mass);

/// Closed forms for cuboid, disc and sphere; point mass gives the supremum.
AlphaResult alpha_exact(const Geometry& geometry, double mass, double r_csl);

/// Leading-order forms valid for bodies much larger than r_CSL (cube, sphere)
/// or thin wide discs. Only cubes (b_x = b_y = b_z), spheres and discs are
/// supported. Out-of-regime inputs throw ValidationError. The density is
/// taken as mass / volume.
AlphaResult alpha_asymptotic(const Geometry& geometry, double mass, double r_csl);

/// Whether alpha_asymptotic accepts the geometry.
bool asymptotic_regime(const Geometry& geometry, double r_csl);

/// Direct numerical evaluation of the defining k-space integral. Cuboids
/// factorize into three 1-D integrals, discs into an axial and a transverse
/// radial integral, spheres and point masses reduce to one radial integral.
/// Throws NumericalError (carrying the best estimate) if the requested
/// tolerance in [1e-12, 1e-3] is not met.
AlphaResult alpha_quadrature(const Geometry& geometry, double mass, double r_csl,
                             double rel_tol = 1e-8);

AlphaResult compute_alpha(AlphaMethod method, const Geometry& geometry, double mass,
                          double r_csl);

}  // namespace collapse
