#include <cmath>
#include <sstream>

#include "doctest.h"
#include "collapse/constants.hpp"
#include "collapse/survey.hpp"
#include "support/oracles.hpp"

using namespace collapse;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

struct Golden {
  const char* name;
  double lambda_t;
  double lambda_sql;
  double published_t;
  double published_sql;
};

// Frozen outputs of this code; the published values are the reference columns.
constexpr Golden kGolden[] = {
    {"gw_detector", 2.31364648e-01, 4.62655864e-04, 2e-1, 3e-4},
    {"gw_detector_sphere", 2.87054096e-01, 5.74017084e-04, 2e-1, 3e-4},
    {"suspended_disc", 2.56748427e-06, 5.13415365e-08, 5e-6, 1e-7},
    {"hypothetical_disc", 1.72116117e-10, 2.06506564e-09, 2e-10, 2e-9},
    {"sin_membrane", 3.66181669e-01, 2.86921606e-06, 4e-1, 3e-6},
    {"al_membrane", 1.44610585e-05, 2.54474494e-07, 1e-5, 2e-7},
};

bool within_factor(double value, double target, double factor) {
  return value >= target / factor && value <= target * factor;
}

ExperimentConfig bundled(const std::string& name) { return load_experiment(bundled_config_dir() / name); }

}  // namespace

TEST_SUITE("survey_cli") {

TEST_CASE("table rows against golden and published values") {
  const auto rows = run_table1(bundled_config_dir() / "table1");
  REQUIRE(rows.size() == std::size(kGolden));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i].bounds;
    const auto& g = kGolden[i];
    CAPTURE(g.name);
    CHECK(r.name == g.name);
    CHECK(rows[i].alternate == (r.name == std::string("gw_detector_sphere")));
    CHECK(rel(r.bounds.lambda_thermal, g.lambda_t) < 0.10);
    CHECK(rel(r.bounds.lambda_measurement, g.lambda_sql) < 0.10);
    CHECK(within_factor(r.bounds.lambda_thermal, g.published_t, 2.0));
    CHECK(within_factor(r.bounds.lambda_measurement, g.published_sql, 2.0));
    CHECK(r.reference.lambda_thermal == g.published_t);
    CHECK(r.bounds.mode == SusceptibilityMode::full_lorentzian);
  }
}

TEST_CASE("hypothetical disc through an independent chain") {
  const auto r = run_bounds(bundled("table1/hypothetical_disc.cfg"));
  const double m = 1e-7;
  const double alpha = oracle::alpha_disc(m, 4e-4, 1e-4, 1e-7);
  const double gamma = 2 * oracle::kPi * 0.1 / 1e6;
  const double lt = 2 * 1e-14 * gamma * oracle::kBoltzmann * 0.2 * m / (oracle::kHbar * oracle::kHbar * alpha);
  const double w = 2 * oracle::kPi * 100;
  const double ls = 1e-14 / (oracle::kHbar * alpha * oracle::chi_abs(m, 2 * oracle::kPi * 0.1, gamma, w));
  CHECK(rel(r.alpha.alpha, alpha) < 1e-9);
  CHECK(rel(r.bounds.lambda_thermal, lt) < 1e-9);
  CHECK(rel(r.bounds.lambda_measurement, ls) < 1e-9);
  CHECK(r.lambda_threshold == doctest::Approx(lt + ls).epsilon(1e-9));
  CHECK(r.range_verdict == "within_range");
  CHECK(r.d_thermal == doctest::Approx(2 * gamma * m * oracle::kBoltzmann * 0.2));
}

TEST_CASE("sensitivity verdicts") {
  auto cfg = bundled("table1/hypothetical_disc.cfg");
  CHECK(run_bounds(cfg).lambda_verdict.empty());
  cfg.collapse.lambda_csl = 1e-8;
  CHECK(run_bounds(cfg).lambda_verdict == "detectable");
  cfg.collapse.lambda_csl = 1e-9;
  CHECK(run_bounds(cfg).lambda_verdict == "not_detectable");
  CHECK(run_bounds(bundled("table1/gw_detector.cfg")).range_verdict == "above_range");
  // The measurement frequency can be overridden per call.
  const auto lo = run_bounds(cfg, hz_to_rad_s(10.0));
  CHECK(lo.bounds.omega == doctest::Approx(hz_to_rad_s(10.0)));
  CHECK(lo.bounds.lambda_measurement < run_bounds(cfg).bounds.lambda_measurement);
}

TEST_CASE("structured records") {
  const auto r = run_bounds(bundled("table1/al_membrane.cfg"));
  const auto j = to_json(r);
  for (const char* key : {"alpha", "d_thermal_n2s", "chi_inverse_n_per_m", "lambda_t", "lambda_sql", "warnings"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["sigma_dp_m"].is_null());
  std::ostringstream csv;
  write_bounds_csv(csv, {r});
  CHECK(csv.str().find("al_membrane,2.58911884e+23") != std::string::npos);
}

namespace {

SweepSpec gamma_sweep(std::size_t points, const std::string& max = "1e-2") {
  const std::string text = R"([geometry]
shape = cube
from_mass = true
[material]
density = 2300
[oscillator]
mass = 1e-9
omega_hz = 1
temperature = 1
[sweep]
output = lambda_t
[sweep.axis1]
parameter = oscillator.gamma_rad_s
min = 1e-9
max = )" + max + "\npoints = " + std::to_string(points) + "\n";
  return build_sweep(ConfigDocument::parse(text, "gamma_sweep.cfg"));
}

std::string csv_of(const SweepResult& r) {
  std::ostringstream out;
  write_sweep_csv(out, r);
  return out.str();
}

}  // namespace

TEST_CASE("sweeps are independent of worker count") {
  auto spec = load_sweep(bundled_config_dir() / "thermal_map.cfg");
  spec.axis1.points = 9;
  spec.axis2->points = 5;
  const auto serial = csv_of(run_sweep(spec, 1));
  CHECK(serial == csv_of(run_sweep(spec, 3)));
  CHECK(serial == csv_of(run_sweep(spec, 16)));
  CHECK(std::count(serial.begin(), serial.end(), '\n') == 1 + 45);
}

TEST_CASE("one-point axis gives a single row") {
  const auto spec = gamma_sweep(1, "1e-9");
  const auto r = run_sweep(spec, 2);
  const auto text = csv_of(r);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
}

TEST_CASE("decade contours land on the level") {
  // Lambda_T is linear in gamma, so log-log interpolation is exact.
  const auto r = run_sweep(gamma_sweep(8), 1);
  const auto contours = extract_contours(r);
  REQUIRE(contours.size() >= 5);
  auto doc = r.spec.base;
  for (const auto& c : contours) {
    doc.set_number("oscillator.gamma_rad_s", c.axis1);
    const double value = evaluate_output(build_experiment(doc), SweepOutput::lambda_t);
    CHECK(rel(value, std::pow(10.0, c.decade)) < 1e-10);
  }
}

TEST_CASE("sweep outputs") {
  auto doc = ConfigDocument::parse(R"([geometry]
shape = cube
from_mass = true
[material]
density = 2369
lattice_constant = 2.7e-10
nuclear_mass_amu = 28.0855
[oscillator]
mass = 1e-9
omega_hz = 1
q = 1e6
temperature = 1
[readout]
omega_hz = 100
)");
  const auto cfg = build_experiment(doc);
  const auto b = run_bounds(cfg);
  CHECK(evaluate_output(cfg, SweepOutput::alpha) == b.alpha.alpha);
  CHECK(evaluate_output(cfg, SweepOutput::lambda_t) == b.bounds.lambda_thermal);
  CHECK(evaluate_output(cfg, SweepOutput::lambda_sql) == b.bounds.lambda_measurement);
  CHECK(evaluate_output(cfg, SweepOutput::sigma_dp) == *b.sigma_dp);
  // S_f at the SQL coupling equals thermal plus hbar / |chi| with lambda = 0.
  CHECK(evaluate_output(cfg, SweepOutput::s_f) ==
        doctest::Approx(b.d_thermal + constants::hbar * b.chi_inverse).epsilon(1e-12));
}

TEST_CASE("desk campaign detects the injected collapse noise") {
  const auto doc = ConfigDocument::load(bundled_config_dir() / "desk_campaign.cfg");
  const auto rep = run_campaign(build_experiment(doc), *build_campaign(doc));
  CHECK(rep.estimate.segments >= 64);
  CHECK(rep.detectable);
  CHECK(rep.predicted_excess_ratio == doctest::Approx(11.0).epsilon(0.1));
  CHECK(rel(rep.excess.band_ratio, rep.predicted_excess_ratio) < 0.2);
  CHECK(std::abs(rep.comparison.band_ratio - 1.0) < 0.05);
}

TEST_CASE("null campaign shows no excess") {
  const auto doc = ConfigDocument::load(bundled_config_dir() / "desk_campaign_null.cfg");
  const auto rep = run_campaign(build_experiment(doc), *build_campaign(doc));
  CHECK(rep.simulation.collapse.lambda_csl == 0.0);
  CHECK(std::abs(rep.excess_z) < 2.0);
  CHECK_FALSE(rep.detectable);
}

TEST_CASE("channel spectra add") {
  const auto doc = ConfigDocument::load(bundled_config_dir() / "desk_campaign.cfg");
  const auto cfg = build_experiment(doc);
  auto settings = *build_campaign(doc);
  auto band_mean = [&](ChannelSet channels, std::uint64_t seed) {
    settings.channels = channels;
    const auto rep = run_campaign(cfg, settings, seed);
    double s = 0.0;
    for (const auto& b : rep.comparison.bins) s += b.estimate;
    const double n = static_cast<double>(rep.comparison.bins.size());
    return std::pair{s / n, rep.comparison.band_ratio_standard_error * s / n};
  };
  const auto csl = band_mean(ChannelSet::only(NoiseChannel::csl), 1);
  const auto thermal = band_mean(ChannelSet::only(NoiseChannel::thermal), 2);
  const auto both = band_mean(ChannelSet::only(NoiseChannel::csl).with(NoiseChannel::thermal), 3);
  const double sigma = std::sqrt(csl.second * csl.second + thermal.second * thermal.second + both.second * both.second);
  CHECK(std::abs(csl.first + thermal.first - both.first) < 3.0 * sigma);
}

TEST_CASE("campaign guards") {
  const auto doc = ConfigDocument::load(bundled_config_dir() / "desk_campaign.cfg");
  auto settings = *build_campaign(doc);
  settings.duration = 4096 * 4 * settings.dt;
  const auto rep = run_campaign(build_experiment(doc), settings);
  CHECK_FALSE(rep.warnings.empty());
  settings.duration = 4096 * settings.dt;
  CHECK_THROWS_AS(run_campaign(build_experiment(doc), settings), ValidationError);
}

}  // TEST_SUITE
