#include "collapse/survey.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include <fmt/format.h>

#include "collapse/constants.hpp"
#include "collapse/errors.hpp"

namespace collapse {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double free_or_full_chi_inverse(const Oscillator& osc, double omega, SusceptibilityMode mode) {
  if (mode == SusceptibilityMode::free_mass) return osc.mass() * omega * omega;
  return inverse_susceptibility_magnitude(osc, omega);
}

AlphaResult alpha_for(const ExperimentConfig& cfg) {
  return compute_alpha(cfg.alpha_method, cfg.geometry, cfg.oscillator.mass(), cfg.collapse.r_csl);
}

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

BoundsRecord run_bounds(const ExperimentConfig& config, std::optional<double> measurement_omega) {
  BoundsRecord rec;
  const Oscillator& osc = config.oscillator;
  const double omega = measurement_omega ? *measurement_omega : config.require_measurement_omega();
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw ValidationError("measurement frequency must be positive and finite");
  }
  rec.name = config.name;
  rec.geometry = config.geometry.describe();
  rec.mass = osc.mass();
  rec.omega_mechanical = osc.omega();
  rec.gamma = osc.gamma();
  rec.temperature = osc.temperature();
  rec.r_csl = config.collapse.r_csl;
  rec.alpha = alpha_for(config);
  rec.d_thermal = thermal_diffusion(osc);
  rec.chi_inverse = free_or_full_chi_inverse(osc, omega, config.mode);
  rec.g_sql = 1.0 / std::sqrt(constants::hbar / rec.chi_inverse);
  rec.bounds.omega = omega;
  rec.bounds.mode = config.mode;
  rec.bounds.lambda_thermal = thermal_bound(osc, rec.alpha.alpha, rec.r_csl);
  rec.bounds.lambda_measurement =
      measurement_bound(osc, rec.alpha.alpha, rec.r_csl, omega, config.mode);
  if (config.material.lattice()) {
    rec.sigma_dp = dp_blur_bound(config.material, osc, omega);
    rec.bounds.sigma_dp = *rec.sigma_dp;
  }
  rec.lambda_csl = config.collapse.lambda_csl;
  rec.d_csl = csl_diffusion(rec.lambda_csl, rec.r_csl, rec.alpha.alpha);
  rec.lambda_threshold = rec.bounds.lambda_thermal + rec.bounds.lambda_measurement;
  if (rec.lambda_threshold < kLambdaRangeLow) {
    rec.range_verdict = "below_range";
  } else if (rec.lambda_threshold <= kLambdaRangeHigh) {
    rec.range_verdict = "within_range";
  } else {
    rec.range_verdict = "above_range";
  }
  if (rec.lambda_csl > 0.0) {
    rec.lambda_verdict = rec.lambda_csl > rec.lambda_threshold ? "detectable" : "not_detectable";
  }
  rec.reference = config.reference;
  rec.warnings = config.consistency.warnings;
  return rec;
}

nlohmann::json to_json(const BoundsRecord& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["geometry"] = r.geometry;
  j["mass_kg"] = r.mass;
  j["omega_mechanical_rad_s"] = r.omega_mechanical;
  j["gamma_rad_s"] = r.gamma;
  j["temperature_k"] = r.temperature;
  j["alpha"] = r.alpha.alpha;
  j["alpha_method"] = to_string(r.alpha.method);
  j["alpha_relative_error"] = r.alpha.estimated_relative_error;
  j["r_csl_m"] = r.r_csl;
  j["d_thermal_n2s"] = r.d_thermal;
  j["chi_inverse_n_per_m"] = r.chi_inverse;
  j["g_sql"] = r.g_sql;
  j["omega_measurement_rad_s"] = r.bounds.omega;
  j["susceptibility"] = to_string(r.bounds.mode);
  j["lambda_t"] = r.bounds.lambda_thermal;
  j["lambda_sql"] = r.bounds.lambda_measurement;
  j["sigma_dp_m"] = optional_json(r.sigma_dp);
  j["lambda_threshold"] = r.lambda_threshold;
  j["range_verdict"] = r.range_verdict;
  j["lambda_csl"] = r.lambda_csl;
  j["d_csl_n2s"] = r.d_csl;
  j["lambda_verdict"] = r.lambda_verdict;
  j["reference_lambda_t"] = optional_json(r.reference.lambda_thermal);
  j["reference_lambda_sql"] = optional_json(r.reference.lambda_measurement);
  j["warnings"] = r.warnings;
  return j;
}

void write_bounds_csv(std::ostream& out, const std::vector<BoundsRecord>& records) {
  out << "name,alpha,alpha_method,d_thermal_n2s,chi_inverse_n_per_m,omega_rad_s,lambda_t,"
         "lambda_sql,lambda_threshold,sigma_dp_m,range_verdict,reference_lambda_t,"
         "reference_lambda_sql\n";
  auto opt = [](const std::optional<double>& v) {
    return v ? fmt::format("{:.8e}", *v) : std::string();
  };
  for (const auto& r : records) {
    out << fmt::format("{},{:.8e},{},{:.8e},{:.8e},{:.8e},{:.8e},{:.8e},{:.8e},{},{},{},{}\n", r.name,
                       r.alpha.alpha, to_string(r.alpha.method), r.d_thermal, r.chi_inverse,
                       r.bounds.omega, r.bounds.lambda_thermal, r.bounds.lambda_measurement,
                       r.lambda_threshold, opt(r.sigma_dp), r.range_verdict,
                       opt(r.reference.lambda_thermal), opt(r.reference.lambda_measurement));
  }
}

void write_provenance(std::ostream& out, const std::string& command, const ConfigDocument& doc,
                      std::optional<std::uint64_t> seed) {
  out << "# collapse " << command << '\n';
  out << "# config: " << doc.source() << '\n';
  if (seed) out << "# seed: " << *seed << '\n';
  for (const auto& line : doc.canonical_lines()) out << "# cfg " << line << '\n';
}

nlohmann::json provenance_json(const std::string& command, const ConfigDocument& doc,
                               std::optional<std::uint64_t> seed) {
  nlohmann::json j;
  j["command"] = command;
  j["config"] = doc.source();
  if (seed) j["seed"] = *seed;
  nlohmann::json keys = nlohmann::json::object();
  for (const auto& [key, entry] : doc.entries()) keys[key] = entry.value;
  j["keys"] = keys;
  return j;
}

double evaluate_output(const ExperimentConfig& config, SweepOutput output) {
  switch (output) {
    case SweepOutput::alpha:
      return alpha_for(config).alpha;
    case SweepOutput::lambda_t:
      return thermal_bound(config.oscillator, alpha_for(config).alpha, config.collapse.r_csl);
    case SweepOutput::lambda_sql:
      return measurement_bound(config.oscillator, alpha_for(config).alpha, config.collapse.r_csl,
                               config.require_measurement_omega(), config.mode);
    case SweepOutput::sigma_dp:
      return dp_blur_bound(config.material, config.oscillator, config.require_measurement_omega());
    case SweepOutput::s_f: {
      const Readout readout = config.readout();
      return analytic_force_terms(config.oscillator, readout.coupling(), config.collapse,
                                  alpha_for(config).alpha, readout.measurement_omega())
          .total();
    }
  }
  return kNaN;
}

SweepResult run_sweep(const SweepSpec& spec, unsigned threads) {
  SweepResult result;
  result.spec = spec;
  result.axis1_values = spec.axis1.values();
  result.axis2_values = spec.axis2 ? spec.axis2->values() : std::vector<double>{kNaN};
  const std::size_t n1 = result.axis1_values.size();
  const std::size_t n2 = result.axis2_values.size();
  result.values.assign(n1 * n2, kNaN);

  std::vector<std::string> errors(n1 * n2);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t idx = next++; idx < n1 * n2; idx = next++) {
      const std::size_t i = idx / n2;
      const std::size_t j = idx % n2;
      try {
        ConfigDocument doc = spec.base;
        doc.set_number(spec.axis1.parameter, result.axis1_values[i]);
        if (spec.axis2) doc.set_number(spec.axis2->parameter, result.axis2_values[j]);
        result.values[idx] = evaluate_output(build_experiment(doc), spec.output);
      } catch (const std::exception& e) {
        errors[idx] = e.what();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n1 * n2));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::size_t failed = 0;
  std::string first;
  for (const auto& e : errors) {
    if (e.empty()) continue;
    if (failed++ == 0) first = e;
  }
  if (failed == n1 * n2) throw ValidationError(fmt::format("every sweep point failed: {}", first));
  if (failed > 0) {
    result.warnings.push_back(
        fmt::format("{} of {} grid points failed and are written as nan; first: {}", failed, n1 * n2, first));
  }
  return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& r) {
  const auto& spec = r.spec;
  out << spec.axis1.parameter;
  if (spec.axis2) out << ',' << spec.axis2->parameter;
  out << ',' << to_string(spec.output) << '\n';
  for (std::size_t i = 0; i < r.axis1_values.size(); ++i) {
    for (std::size_t j = 0; j < r.axis2_values.size(); ++j) {
      out << fmt::format("{:.8e}", r.axis1_values[i]);
      if (spec.axis2) out << fmt::format(",{:.8e}", r.axis2_values[j]);
      out << fmt::format(",{:.8e}\n", r.at(i, j));
    }
  }
}

namespace {

void crossings(double a0, double a1, double v0, double v1, const std::function<void(int, double)>& emit) {
  if (!(v0 > 0.0) || !(v1 > 0.0) || !std::isfinite(v0) || !std::isfinite(v1)) return;
  const double l0 = std::log10(v0);
  const double l1 = std::log10(v1);
  if (l0 == l1) return;
  const double lo = std::min(l0, l1);
  const double hi = std::max(l0, l1);
  for (int d = static_cast<int>(std::ceil(lo)); d <= static_cast<int>(std::floor(hi)); ++d) {
    if (d == l0) continue;  // an exact grid hit belongs to the segment ending there
    const double t = (d - l0) / (l1 - l0);
    emit(d, std::exp(std::log(a0) + t * (std::log(a1) - std::log(a0))));
  }
}

}  // namespace

std::vector<ContourPoint> extract_contours(const SweepResult& r) {
  std::vector<ContourPoint> out;
  const std::size_t n1 = r.axis1_values.size();
  const std::size_t n2 = r.axis2_values.size();
  const bool two_d = r.spec.axis2.has_value();
  for (std::size_t j = 0; j < n2; ++j) {
    for (std::size_t i = 0; i + 1 < n1; ++i) {
      crossings(r.axis1_values[i], r.axis1_values[i + 1], r.at(i, j), r.at(i + 1, j),
                [&](int d, double a) { out.push_back({d, a, r.axis2_values[j]}); });
    }
  }
  if (two_d) {
    for (std::size_t i = 0; i < n1; ++i) {
      for (std::size_t j = 0; j + 1 < n2; ++j) {
        crossings(r.axis2_values[j], r.axis2_values[j + 1], r.at(i, j), r.at(i, j + 1),
                  [&](int d, double a) { out.push_back({d, r.axis1_values[i], a}); });
      }
    }
  }
  return out;
}

void write_contours_csv(std::ostream& out, const SweepResult& r, const std::vector<ContourPoint>& contours) {
  out << "log10_level," << r.spec.axis1.parameter;
  if (r.spec.axis2) out << ',' << r.spec.axis2->parameter;
  out << '\n';
  for (const auto& c : contours) {
    out << fmt::format("{},{:.8e}", c.decade, c.axis1);
    if (r.spec.axis2) out << fmt::format(",{:.8e}", c.axis2);
    out << '\n';
  }
}

SimulationConfig make_simulation_config(const ExperimentConfig& config, const CampaignSettings& settings,
                                        std::optional<std::uint64_t> seed) {
  SimulationConfig sim{config.oscillator,  config.readout(),         config.collapse,
                       alpha_for(config).alpha, settings.dt,       settings.duration,
                       seed.value_or(settings.seed), settings.channels, std::nullopt,
                       InitialState::stationary()};
  if (settings.d_csl_over_noise) {
    const double omega = sim.readout.measurement_omega();
    const double noise = thermal_diffusion(config.oscillator) +
                         constants::hbar * inverse_susceptibility_magnitude(config.oscillator, omega);
    const double unit = csl_diffusion(1.0, config.collapse.r_csl, sim.alpha);
    sim.collapse.lambda_csl = *settings.d_csl_over_noise * noise / unit;
  }
  sim.validate();
  return sim;
}

CampaignReport run_campaign(const ExperimentConfig& config, const CampaignSettings& settings,
                            std::optional<std::uint64_t> seed) {
  CampaignReport rep{make_simulation_config(config, settings, seed)};
  rep.welch = settings.welch;
  const std::size_t n = rep.simulation.steps();
  const std::size_t available = rep.welch.segment_count(n);
  if (available < rep.welch.min_segments) {
    if (available < 2) {
      throw ValidationError(fmt::format(
          "record of {} samples yields fewer than 2 Welch segments of {}", n, rep.welch.segment_length));
    }
    rep.warnings.push_back(fmt::format("only {} Welch segments available (requested at least {})",
                                       available, rep.welch.min_segments));
    rep.welch.min_segments = available;
  }
  rep.record = simulate(rep.simulation);
  rep.estimate = infer_force_spectrum(rep.record, rep.simulation.readout, rep.simulation.oscillator, rep.welch);
  rep.analytic = analytic_force_psd(rep.simulation.oscillator, rep.simulation.readout, rep.simulation.collapse,
                                    rep.simulation.alpha, rep.estimate.omega, rep.simulation.channels);
  rep.noise_only = analytic_force_psd(rep.simulation.oscillator, rep.simulation.readout,
                                      rep.simulation.collapse, rep.simulation.alpha, rep.estimate.omega,
                                      rep.simulation.channels.without(NoiseChannel::csl));
  rep.comparison = compare_to_analytic(rep.estimate, rep.analytic, settings.band_min, settings.band_max);
  const auto background = rep.simulation.channels.without(NoiseChannel::csl);
  if (background == ChannelSet::none()) {
    // Nothing to measure an excess against.
    rep.predicted_excess_ratio = std::numeric_limits<double>::infinity();
    rep.excess_z = std::numeric_limits<double>::infinity();
    rep.detectable = rep.simulation.collapse.lambda_csl > 0.0;
    rep.warnings.push_back("no non-collapse noise channel enabled; excess test skipped");
  } else {
    rep.excess = compare_to_analytic(rep.estimate, rep.noise_only, settings.band_min, settings.band_max);
    double predicted = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < rep.estimate.omega.size(); ++k) {
      const double w = rep.estimate.omega[k];
      if (w < settings.band_min || w > settings.band_max) continue;
      predicted += rep.analytic.s_f[k] / rep.noise_only.s_f[k];
      ++count;
    }
    rep.predicted_excess_ratio = count > 0 ? predicted / static_cast<double>(count) : 1.0;
    rep.excess_z = rep.excess.band_z;
    rep.detectable = rep.excess_z > kDetectionZ;
  }
  if (!rep.comparison.flagged.empty()) {
    rep.warnings.push_back(fmt::format("{} bins deviate from the analytic spectrum by more than {} sigma",
                                       rep.comparison.flagged.size(), kFlagZ));
  }
  return rep;
}

namespace {

nlohmann::json comparison_json(const ComparisonReport& c) {
  nlohmann::json j;
  j["omega_min_rad_s"] = c.omega_min;
  j["omega_max_rad_s"] = c.omega_max;
  j["bins"] = c.bins.size();
  j["flagged_bins"] = c.flagged.size();
  j["band_ratio"] = c.band_ratio;
  j["band_ratio_standard_error"] = c.band_ratio_standard_error;
  j["band_z"] = c.band_z;
  j["band_ratio_within_tolerance"] = c.band_ratio_within_tolerance;
  return j;
}

}  // namespace

nlohmann::json to_json(const CampaignReport& r) {
  nlohmann::json j;
  j["dt_s"] = r.simulation.dt;
  j["duration_s"] = r.simulation.duration;
  j["samples"] = r.record.times.size();
  j["seed"] = r.simulation.seed;
  j["channels"] = r.simulation.channels.to_string();
  j["alpha"] = r.simulation.alpha;
  j["lambda_csl"] = r.simulation.collapse.lambda_csl;
  j["coupling"] = r.simulation.readout.coupling();
  j["omega_measurement_rad_s"] = r.simulation.readout.measurement_omega();
  j["welch"] = {{"segment_length", r.welch.segment_length},
                {"overlap", r.welch.overlap},
                {"window", to_string(r.welch.window)},
                {"segments", r.estimate.segments},
                {"averaging_inflation", r.estimate.averaging_inflation}};
  j["diffusion"] = {{"thermal", r.record.diffusion.thermal},
                    {"csl", r.record.diffusion.csl},
                    {"backaction", r.record.diffusion.backaction},
                    {"shot", r.record.diffusion.shot}};
  j["comparison"] = comparison_json(r.comparison);
  j["excess"] = comparison_json(r.excess);
  j["predicted_excess_ratio"] = r.predicted_excess_ratio;
  j["excess_z"] = r.excess_z;
  j["detection_threshold_z"] = kDetectionZ;
  j["verdict"] = r.detectable ? "detectable" : "not_detectable";
  j["warnings"] = r.warnings;
  return j;
}

std::vector<Table1Row> run_table1(const std::filesystem::path& dir) {
  std::ifstream list(dir / "rows.txt");
  if (!list) throw ValidationError(fmt::format("cannot open {}", (dir / "rows.txt").string()));
  std::vector<Table1Row> rows;
  std::string line;
  while (std::getline(list, line)) {
    if (line.empty() || line.front() == '#') continue;
    Table1Row row;
    if (line.front() == '+') {
      row.alternate = true;
      line.erase(0, 1);
    }
    row.bounds = run_bounds(load_experiment(dir / line));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace collapse
