#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "collapse/constants.hpp"
#include "collapse/errors.hpp"

namespace collapse {

/// Rectangular block with edge lengths along x, y, z (m). Motion is along x.
struct Cuboid {
  double b_x;
  double b_y;
  double b_z;
};

/// Cylindrical disc moving along its symmetry axis (x).
struct Disc {
  double radius;
  double thickness;
};

struct Sphere {
  double radius;
};

struct PointMass {};

enum class ShapeKind { cuboid, disc, sphere, point };

std::string to_string(ShapeKind kind);

/// Homogeneous rigid body shape. All lengths are strictly positive; this is
/// checked by the factory functions.
class Geometry {
 public:
  using Shape = std::variant<Cuboid, Disc, Sphere, PointMass>;

  static Geometry cuboid(double b_x, double b_y, double b_z);
  static Geometry cube(double side) { return cuboid(side, side, side); }
  static Geometry disc(double radius, double thickness);
  static Geometry sphere(double radius);
  static Geometry point();

  ShapeKind kind() const;
  const Shape& shape() const noexcept { return shape_; }

  /// Zero for a point mass.
  double volume() const;

  /// Same shape with every length multiplied by `factor`.
  Geometry scaled(double factor) const;

  std::string describe() const;

 private:
  explicit Geometry(Shape shape) : shape_(shape) {}
  Shape shape_;
};

/// Cubic monoatomic lattice data, only needed for the Diosi-Penrose model.
struct Lattice {
  double constant;      // a (m)
  double nuclear_mass;  // m_A (kg)
};

class Material {
 public:
  explicit Material(double density);
  /// Requires nuclear_mass / constant^3 to match `density` within 1%.
  Material(double density, Lattice lattice);

  double density() const noexcept { return density_; }
  const std::optional<Lattice>& lattice() const noexcept { return lattice_; }
  /// Throws ValidationError if no lattice data is attached.
  const Lattice& require_lattice() const;

 private:
  double density_;
  std::optional<Lattice> lattice_;
};

/// Center-of-mass mechanical mode. The quality factor is derived from the
/// stored damping rate and never stored separately.
class Oscillator {
 public:
  Oscillator(double mass, double omega, double gamma, double temperature);
  static Oscillator from_quality_factor(double mass, double omega, double q,
                                        double temperature);

  double mass() const noexcept { return mass_; }
  double omega() const noexcept { return omega_; }
  double gamma() const noexcept { return gamma_; }
  double temperature() const noexcept { return temperature_; }
  double quality_factor() const noexcept { return omega_ / gamma_; }

  /// k_B T >= 10 hbar Omega, the regime where D_T = 2 gamma m k_B T holds.
  bool high_temperature_valid() const noexcept;

  Oscillator with_mass(double mass) const;

 private:
  double mass_;
  double omega_;
  double gamma_;
  double temperature_;
};

/// Optical constituents of the position transduction g = k sqrt(F Phi).
struct OpticalSetup {
  double wave_number;  // k (1/m)
  double finesse;
  double photon_flux;  // Phi (1/s)

  static OpticalSetup from_power(double wave_number, double finesse,
                                 double power, double optical_omega);
  double coupling() const;
};

class Readout {
 public:
  Readout(double coupling, double measurement_omega);
  /// Coupling derived from the optics.
  Readout(const OpticalSetup& optics, double measurement_omega);
  /// Both given; they must agree to 1e-12 relative.
  Readout(double coupling, const OpticalSetup& optics, double measurement_omega);

  double coupling() const noexcept { return coupling_; }
  double measurement_omega() const noexcept { return measurement_omega_; }
  const std::optional<OpticalSetup>& optics() const noexcept { return optics_; }

  Readout with_coupling(double coupling) const;
  Readout with_measurement_omega(double omega) const;

 private:
  double coupling_;
  double measurement_omega_;
  std::optional<OpticalSetup> optics_;
};

inline constexpr double kDefaultRcsl = 100e-9;

struct CollapseParams {
  double lambda_csl = 0.0;     // 1/s
  double r_csl = kDefaultRcsl;  // m
  std::optional<double> sigma_dp;  // m

  void validate() const;
  /// sigma_DP <= a / 5.
  bool dp_valid_for(const Lattice& lattice) const;
};

struct ConsistencyReport {
  double volume = 0.0;
  double geometric_mass = 0.0;
  double mass_mismatch = 0.0;  // |rho V - m| / m
  std::vector<std::string> warnings;
};

inline constexpr double kMassConsistencyTolerance = 0.05;

/// Cross-checks geometry, material and oscillator. When
/// `geometry_carries_mass` is set a density/mass mismatch above 5% is a hard
/// error; otherwise it is reported as a warning.
ConsistencyReport validate_experiment(const Geometry& geometry,
                                      const Material& material,
                                      const Oscillator& oscillator,
                                      bool geometry_carries_mass = true);

}  // namespace collapse
