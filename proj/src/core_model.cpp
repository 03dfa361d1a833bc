#include "collapse/core_model.hpp"

#include <cmath>

#include <fmt/format.h>

namespace collapse {

namespace {

void require_length(double value, const char* name) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw ValidationError(fmt::format("{} must be a finite positive length, got {}", name, value));
  }
}

void require_positive(double value, const char* name) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw ValidationError(fmt::format("{} must be finite and > 0, got {}", name, value));
  }
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::cuboid: return "cuboid";
    case ShapeKind::disc: return "disc";
    case ShapeKind::sphere: return "sphere";
    case ShapeKind::point: return "point";
  }
  return "unknown";
}

Geometry Geometry::cuboid(double b_x, double b_y, double b_z) {
  require_length(b_x, "cuboid b_x");
  require_length(b_y, "cuboid b_y");
  require_length(b_z, "cuboid b_z");
  return Geometry(Cuboid{b_x, b_y, b_z});
}

Geometry Geometry::disc(double radius, double thickness) {
  require_length(radius, "disc radius");
  require_length(thickness, "disc thickness");
  return Geometry(Disc{radius, thickness});
}

Geometry Geometry::sphere(double radius) {
  require_length(radius, "sphere radius");
  return Geometry(Sphere{radius});
}

Geometry Geometry::point() { return Geometry(PointMass{}); }

ShapeKind Geometry::kind() const {
  return std::visit(overloaded{
                        [](const Cuboid&) { return ShapeKind::cuboid; },
                        [](const Disc&) { return ShapeKind::disc; },
                        [](const Sphere&) { return ShapeKind::sphere; },
                        [](const PointMass&) { return ShapeKind::point; },
                    },
                    shape_);
}

double Geometry::volume() const {
  return std::visit(overloaded{
                        [](const Cuboid& c) { return c.b_x * c.b_y * c.b_z; },
                        [](const Disc& d) { return constants::pi * d.radius * d.radius * d.thickness; },
                        [](const Sphere& s) { return 4.0 / 3.0 * constants::pi * s.radius * s.radius * s.radius; },
                        [](const PointMass&) { return 0.0; },
                    },
                    shape_);
}

Geometry Geometry::scaled(double factor) const {
  require_positive(factor, "scale factor");
  return std::visit(overloaded{
                        [&](const Cuboid& c) { return cuboid(c.b_x * factor, c.b_y * factor, c.b_z * factor); },
                        [&](const Disc& d) { return disc(d.radius * factor, d.thickness * factor); },
                        [&](const Sphere& s) { return sphere(s.radius * factor); },
                        [](const PointMass&) { return point(); },
                    },
                    shape_);
}

std::string Geometry::describe() const {
  return std::visit(overloaded{
                        [](const Cuboid& c) { return fmt::format("cuboid(b_x={:.6g} m, b_y={:.6g} m, b_z={:.6g} m)", c.b_x, c.b_y, c.b_z); },
                        [](const Disc& d) { return fmt::format("disc(R={:.6g} m, d={:.6g} m)", d.radius, d.thickness); },
                        [](const Sphere& s) { return fmt::format("sphere(R={:.6g} m)", s.radius); },
                        [](const PointMass&) { return std::string("point"); },
                    },
                    shape_);
}

Material::Material(double density) : density_(density) {
  require_positive(density, "density");
}

Material::Material(double density, Lattice lattice) : Material(density) {
  require_length(lattice.constant, "lattice constant");
  require_positive(lattice.nuclear_mass, "nuclear mass");
  const double lattice_density =
      lattice.nuclear_mass / (lattice.constant * lattice.constant * lattice.constant);
  if (std::abs(lattice_density - density) > 0.01 * density) {
    throw ValidationError(fmt::format(
        "lattice density m_A/a^3 = {:.6g} kg/m^3 disagrees with density {:.6g} kg/m^3 by more than 1%",
        lattice_density, density));
  }
  lattice_ = lattice;
}

const Lattice& Material::require_lattice() const {
  if (!lattice_) {
    throw ValidationError("material has no lattice data (lattice constant and nuclear mass are required for DP)");
  }
  return *lattice_;
}

Oscillator::Oscillator(double mass, double omega, double gamma, double temperature)
    : mass_(mass), omega_(omega), gamma_(gamma), temperature_(temperature) {
  require_positive(mass, "oscillator mass");
  require_positive(omega, "oscillator resonance frequency");
  require_positive(gamma, "oscillator damping rate");
  require_positive(temperature, "oscillator temperature");
}

Oscillator Oscillator::from_quality_factor(double mass, double omega, double q,
                                           double temperature) {
  require_positive(q, "quality factor");
  return Oscillator(mass, omega, omega / q, temperature);
}

bool Oscillator::high_temperature_valid() const noexcept {
  return constants::k_B * temperature_ >= 10.0 * constants::hbar * omega_;
}

Oscillator Oscillator::with_mass(double mass) const {
  return Oscillator(mass, omega_, gamma_, temperature_);
}

OpticalSetup OpticalSetup::from_power(double wave_number, double finesse,
                                      double power, double optical_omega) {
  require_positive(power, "optical power");
  require_positive(optical_omega, "optical frequency");
  return OpticalSetup{wave_number, finesse, power / (constants::hbar * optical_omega)};
}

double OpticalSetup::coupling() const {
  require_positive(wave_number, "wave number");
  require_positive(finesse, "finesse");
  require_positive(photon_flux, "photon flux");
  return wave_number * std::sqrt(finesse * photon_flux);
}

Readout::Readout(double coupling, double measurement_omega)
    : coupling_(coupling), measurement_omega_(measurement_omega) {
  require_positive(coupling, "coupling g");
  require_positive(measurement_omega, "measurement frequency");
}

Readout::Readout(const OpticalSetup& optics, double measurement_omega)
    : Readout(optics.coupling(), measurement_omega) {
  optics_ = optics;
}

Readout::Readout(double coupling, const OpticalSetup& optics, double measurement_omega)
    : Readout(coupling, measurement_omega) {
  const double derived = optics.coupling();
  if (std::abs(derived - coupling) > 1e-12 * coupling) {
    throw ValidationError(fmt::format(
        "coupling g = {:.12g} inconsistent with optics k sqrt(F Phi) = {:.12g}", coupling, derived));
  }
  optics_ = optics;
}

Readout Readout::with_coupling(double coupling) const {
  return Readout(coupling, measurement_omega_);
}

Readout Readout::with_measurement_omega(double omega) const {
  Readout out(coupling_, omega);
  out.optics_ = optics_;
  return out;
}

void CollapseParams::validate() const {
  if (!std::isfinite(lambda_csl) || lambda_csl < 0.0) {
    throw ValidationError(fmt::format("lambda_CSL must be >= 0, got {}", lambda_csl));
  }
  require_length(r_csl, "r_CSL");
  if (sigma_dp) require_length(*sigma_dp, "sigma_DP");
}

bool CollapseParams::dp_valid_for(const Lattice& lattice) const {
  return sigma_dp && *sigma_dp <= lattice.constant / 5.0;
}

ConsistencyReport validate_experiment(const Geometry& geometry,
                                      const Material& material,
                                      const Oscillator& oscillator,
                                      bool geometry_carries_mass) {
  ConsistencyReport report;
  report.volume = geometry.volume();
  report.geometric_mass = material.density() * report.volume;
  if (geometry.kind() == ShapeKind::point) {
    report.warnings.emplace_back("point geometry has no volume; mass taken from the oscillator");
  } else {
    report.mass_mismatch =
        std::abs(report.geometric_mass - oscillator.mass()) / oscillator.mass();
    if (report.mass_mismatch > kMassConsistencyTolerance) {
      const auto message = fmt::format(
          "geometric mass rho*V = {:.6g} kg differs from oscillator mass {:.6g} kg by {:.1f}%",
          report.geometric_mass, oscillator.mass(), 100.0 * report.mass_mismatch);
      if (geometry_carries_mass) throw ValidationError(message);
      report.warnings.push_back(message);
    } else if (report.mass_mismatch > 1e-3) {
      report.warnings.push_back(fmt::format(
          "geometric mass differs from oscillator mass by {:.2f}% (within tolerance)",
          100.0 * report.mass_mismatch));
    }
  }
  if (!oscillator.high_temperature_valid()) {
    report.warnings.emplace_back(
        "k_B T < 10 hbar Omega: thermal diffusion D_T = 2 gamma m k_B T is outside its high-temperature regime");
  }
  return report;
}

}  // namespace collapse
