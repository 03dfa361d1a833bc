#include <cmath>
#include <limits>

#include "doctest.h"
#include "collapse/constants.hpp"
#include "collapse/core_model.hpp"

using namespace collapse;

TEST_SUITE("core_model") {

TEST_CASE("geometry factories reject non-positive lengths") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(Geometry::cuboid(1, 0, 1), ValidationError);
  CHECK_THROWS_AS(Geometry::cube(-1), ValidationError);
  CHECK_THROWS_AS(Geometry::disc(1, nan), ValidationError);
  CHECK_THROWS_AS(Geometry::sphere(std::numeric_limits<double>::infinity()), ValidationError);
  CHECK_NOTHROW(Geometry::point());
}

TEST_CASE("volumes and scaling") {
  CHECK(Geometry::cuboid(1, 2, 3).volume() == 6.0);
  CHECK(Geometry::disc(2, 0.5).volume() == doctest::Approx(constants::pi * 2.0));
  CHECK(Geometry::sphere(1).volume() == doctest::Approx(4.0 * constants::pi / 3.0));
  CHECK(Geometry::point().volume() == 0.0);
  CHECK(Geometry::sphere(2).scaled(3).volume() == doctest::Approx(27 * Geometry::sphere(2).volume()));
  CHECK(Geometry::disc(1, 1).kind() == ShapeKind::disc);
  CHECK(to_string(ShapeKind::cuboid) == "cuboid");
}

TEST_CASE("mass consistency") {
  const Material silicon(2300.0);
  SUBCASE("0.2589 m silicon cube carries about 40 kg") {
    const auto g = Geometry::cube(0.2589);
    const Oscillator osc(40.0, 2 * constants::pi, 1e-3, 300);
    const auto report = validate_experiment(g, silicon, osc);
    CHECK(report.geometric_mass == doctest::Approx(39.91).epsilon(1e-3));
    CHECK(report.mass_mismatch < kMassConsistencyTolerance);
  }
  SUBCASE("0.4 mm x 0.1 mm disc at 2000 kg/m^3 is about 100 ug") {
    const auto g = Geometry::disc(4e-4, 1e-4);
    const Oscillator osc(1e-7, 1.0, 1e-6, 0.2);
    const auto report = validate_experiment(g, Material(2000.0), osc);
    CHECK(report.geometric_mass == doctest::Approx(1.00531e-7).epsilon(1e-5));
    CHECK_FALSE(report.warnings.empty());
  }
  SUBCASE("a 6% mismatch is fatal only when the geometry carries the mass") {
    const auto g = Geometry::cube(1.0);
    const Oscillator osc(2300.0 * 1.06, 1.0, 1e-3, 300);
    CHECK_THROWS_AS(validate_experiment(g, silicon, osc), ValidationError);
    const auto report = validate_experiment(g, silicon, osc, false);
    CHECK(report.mass_mismatch == doctest::Approx(0.06 / 1.06));
    CHECK_FALSE(report.warnings.empty());
  }
  SUBCASE("point masses are accepted with a warning") {
    const auto report = validate_experiment(Geometry::point(), silicon, Oscillator(1e-12, 1.0, 1e-3, 300));
    CHECK(report.warnings.size() == 1);
  }
}

TEST_CASE("lattice density check") {
  const double a = 5.431e-10 / 2.0;
  const double m_a = 28.0855 * constants::amu;
  const double rho = m_a / (a * a * a);
  CHECK_NOTHROW(Material(rho, Lattice{a, m_a}));
  CHECK_NOTHROW(Material(rho * 1.009, Lattice{a, m_a}));
  CHECK_THROWS_AS(Material(rho * 1.02, Lattice{a, m_a}), ValidationError);
  CHECK_THROWS_AS(Material(2300.0).require_lattice(), ValidationError);
  CHECK_THROWS_AS(Material(-1.0), ValidationError);
}

TEST_CASE("oscillator") {
  const auto osc = Oscillator::from_quality_factor(1e-9, 2 * constants::pi, 1e6, 1.0);
  CHECK(osc.gamma() == doctest::Approx(2 * constants::pi * 1e-6));
  // Omega / (Omega / Q) rounds twice.
  CHECK(std::abs(osc.quality_factor() - 1e6) <= 2 * std::numeric_limits<double>::epsilon() * 1e6);
  CHECK(osc.high_temperature_valid());
  CHECK(Oscillator(48e-15, 2 * constants::pi * 1.1e7, 200, 0.015).high_temperature_valid());
  CHECK_FALSE(Oscillator(48e-15, 2 * constants::pi * 1.1e7, 200, 1e-3).high_temperature_valid());
  CHECK(osc.with_mass(2e-9).mass() == 2e-9);
  CHECK(osc.with_mass(2e-9).gamma() == osc.gamma());
  CHECK_THROWS_AS(Oscillator(0.0, 1, 1, 1), ValidationError);
  CHECK_THROWS_AS(Oscillator(1.0, 1, 0, 1), ValidationError);
  CHECK_THROWS_AS(Oscillator(1.0, 1, 1, -1), ValidationError);
}

TEST_CASE("readout") {
  const OpticalSetup optics{7.4e6, 1e4, 1e15};
  CHECK(optics.coupling() == doctest::Approx(7.4e6 * std::sqrt(1e4 * 1e15)));
  const auto from_power = OpticalSetup::from_power(7.4e6, 1e4, 1e-3, 1.77e15);
  CHECK(from_power.photon_flux == doctest::Approx(1e-3 / (constants::hbar * 1.77e15)));
  CHECK_NOTHROW(Readout(optics.coupling(), optics, 1.0));
  CHECK_THROWS_AS(Readout(optics.coupling() * (1 + 1e-9), optics, 1.0), ValidationError);
  const Readout r(optics, 10.0);
  CHECK(r.coupling() == optics.coupling());
  CHECK(r.with_measurement_omega(20.0).measurement_omega() == 20.0);
  CHECK(r.with_coupling(5.0).coupling() == 5.0);
  CHECK_THROWS_AS(Readout(-1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(Readout(1.0, 0.0), ValidationError);
}

TEST_CASE("collapse parameters") {
  CollapseParams p;
  CHECK(p.r_csl == 1e-7);
  CHECK_NOTHROW(p.validate());
  p.lambda_csl = -1;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p.lambda_csl = 1e-8;
  p.sigma_dp = 1e-11;
  CHECK(p.dp_valid_for(Lattice{1e-10, 1e-26}));
  CHECK_FALSE(p.dp_valid_for(Lattice{4e-11, 1e-26}));
}

TEST_CASE("unit conversion") {
  CHECK(hz_to_rad_s(1.0) == 2 * constants::pi);
  CHECK(rad_s_to_hz(hz_to_rad_s(123.0)) == doctest::Approx(123.0).epsilon(1e-15));
}

}  // TEST_SUITE
