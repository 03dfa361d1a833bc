#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "collapse/collapse_bounds.hpp"
#include "collapse/core_model.hpp"
#include "collapse/dynamics.hpp"
#include "collapse/geometry_factors.hpp"
#include "collapse/spectral.hpp"

namespace collapse {

/// Flat key-value text with dotted section headers:
///
///     name = gw_detector        # comment
///     [oscillator]
///     mass = 40
///     [sweep.axis1]
///     parameter = oscillator.mass
///
/// Keys are stored fully qualified ("oscillator.mass"). Unknown keys are
/// rejected; see docs/config_format.md for the schema.
class ConfigDocument {
 public:
  struct Entry {
    std::string value;
    std::size_t line = 0;
  };

  static ConfigDocument parse(const std::string& text, const std::string& source = "<string>");
  static ConfigDocument load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const std::string& source() const noexcept { return source_; }
  const std::map<std::string, Entry>& entries() const noexcept { return entries_; }

  std::string string(const std::string& key) const;
  std::string string_or(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key) const;
  std::optional<double> optional_number(const std::string& key) const;
  bool boolean_or(const std::string& key, bool fallback) const;
  std::uint64_t unsigned_integer(const std::string& key) const;

  void set(const std::string& key, const std::string& value);
  void set_number(const std::string& key, double value);
  void erase(const std::string& key) { entries_.erase(key); }

  /// "key = value" lines in key order, for provenance headers.
  std::vector<std::string> canonical_lines() const;

 private:
  [[noreturn]] void fail(const std::string& key, const std::string& message) const;

  std::string source_;
  std::map<std::string, Entry> entries_;
};

/// Paper-independent reference values a config may carry for regression.
struct ReferenceValues {
  std::optional<double> lambda_thermal;
  std::optional<double> lambda_measurement;
};

struct ExperimentConfig {
  std::string name;
  std::string note;
  std::string source;
  Geometry geometry = Geometry::point();
  Material material{1.0};
  Oscillator oscillator{1.0, 1.0, 1.0, 1.0};
  bool geometry_carries_mass = true;
  ConsistencyReport consistency;
  std::optional<double> measurement_omega;  // rad/s
  std::optional<double> coupling;           // unset: g_SQL at the measurement frequency
  std::optional<OpticalSetup> optics;
  CollapseParams collapse;
  AlphaMethod alpha_method = AlphaMethod::exact;
  SusceptibilityMode mode = SusceptibilityMode::full_lorentzian;
  ReferenceValues reference;
  ConfigDocument document;

  double require_measurement_omega() const;
  /// Coupling resolved against the measurement frequency.
  Readout readout() const;
};

struct CampaignSettings {
  double dt = 0.0;
  double duration = 0.0;
  std::uint64_t seed = 0;
  ChannelSet channels = ChannelSet::all();
  WelchConfig welch;
  double band_min = 0.0;  // rad/s
  double band_max = 0.0;  // rad/s
  /// When set, lambda_CSL is chosen so that D_CSL equals this multiple of
  /// D_T + hbar/|chi(omega)| at the measurement frequency.
  std::optional<double> d_csl_over_noise;
};

struct SweepAxis {
  std::string parameter;
  double min = 0.0;
  double max = 0.0;
  std::size_t points = 0;

  /// Log-spaced values from min to max.
  std::vector<double> values() const;
};

enum class SweepOutput { lambda_t, lambda_sql, sigma_dp, alpha, s_f };
std::string to_string(SweepOutput output);
SweepOutput parse_sweep_output(const std::string& name);

struct SweepSpec {
  ConfigDocument base;
  SweepAxis axis1;
  std::optional<SweepAxis> axis2;
  SweepOutput output = SweepOutput::lambda_t;
};

ExperimentConfig build_experiment(const ConfigDocument& doc);
std::optional<CampaignSettings> build_campaign(const ConfigDocument& doc);
SweepSpec build_sweep(const ConfigDocument& doc);

ExperimentConfig load_experiment(const std::filesystem::path& path);
SweepSpec load_sweep(const std::filesystem::path& path);

/// Directory holding the bundled configurations.
std::filesystem::path bundled_config_dir();

}  // namespace collapse
