#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "collapse/config.hpp"

namespace collapse {

inline constexpr double kLambdaRangeLow = 1e-10;   // 1/s
inline constexpr double kLambdaRangeHigh = 1e-6;   // 1/s

struct BoundsRecord {
  std::string name;
  std::string geometry;
  double mass = 0.0;
  double omega_mechanical = 0.0;
  double gamma = 0.0;
  double temperature = 0.0;
  AlphaResult alpha;
  double r_csl = 0.0;
  double d_thermal = 0.0;
  double chi_inverse = 0.0;  // 1 / |chi(omega)| in the selected mode
  double g_sql = 0.0;
  BoundReport bounds;
  std::optional<double> sigma_dp;
  double lambda_csl = 0.0;
  double d_csl = 0.0;
  /// Lambda_T + Lambda_SQL: the smallest lambda with D_CSL above the
  /// thermal plus SQL measurement noise.
  double lambda_threshold = 0.0;
  /// "below_range", "within_range" or "above_range" relative to [1e-10, 1e-6] 1/s.
  std::string range_verdict;
  /// "detectable" or "not_detectable" for the configured lambda; empty when lambda = 0.
  std::string lambda_verdict;
  ReferenceValues reference;
  std::vector<std::string> warnings;
};

BoundsRecord run_bounds(const ExperimentConfig& config,
                        std::optional<double> measurement_omega = std::nullopt);

nlohmann::json to_json(const BoundsRecord& record);
void write_bounds_csv(std::ostream& out, const std::vector<BoundsRecord>& records);

/// Header lines ("# ...") recording the command, seed and every config key.
void write_provenance(std::ostream& out, const std::string& command, const ConfigDocument& doc,
                      std::optional<std::uint64_t> seed = std::nullopt);
nlohmann::json provenance_json(const std::string& command, const ConfigDocument& doc,
                               std::optional<std::uint64_t> seed = std::nullopt);

/// Evaluates one sweep output for a fully built experiment.
double evaluate_output(const ExperimentConfig& config, SweepOutput output);

struct SweepResult {
  SweepSpec spec;
  std::vector<double> axis1_values;
  std::vector<double> axis2_values;  // a single NaN when there is no second axis
  std::vector<double> values;        // row-major over (axis1, axis2); NaN where evaluation failed
  std::vector<std::string> warnings;

  double at(std::size_t i, std::size_t j) const { return values[i * axis2_values.size() + j]; }
};

/// Evaluates the grid with up to `threads` workers (0: hardware concurrency).
/// Output order does not depend on the thread count.
SweepResult run_sweep(const SweepSpec& spec, unsigned threads = 0);
void write_sweep_csv(std::ostream& out, const SweepResult& result);

struct ContourPoint {
  int decade = 0;  // log10 of the level
  double axis1 = 0.0;
  double axis2 = 0.0;
};

/// Crossings of integer decades of the output, located by log-log linear
/// interpolation between neighbouring grid points along both axes.
std::vector<ContourPoint> extract_contours(const SweepResult& result);
void write_contours_csv(std::ostream& out, const SweepResult& result,
                        const std::vector<ContourPoint>& contours);

struct CampaignReport {
  explicit CampaignReport(SimulationConfig sim) : simulation(std::move(sim)) {}

  SimulationConfig simulation;
  WelchConfig welch;
  HomodyneRecord record;
  PsdEstimate estimate;
  ForceSpectrum analytic;    // all configured channels
  ForceSpectrum noise_only;  // the same without the CSL channel
  ComparisonReport comparison;
  ComparisonReport excess;
  double predicted_excess_ratio = 1.0;
  double excess_z = 0.0;
  bool detectable = false;
  std::vector<std::string> warnings;
};

inline constexpr double kDetectionZ = 3.0;

SimulationConfig make_simulation_config(const ExperimentConfig& config,
                                        const CampaignSettings& settings,
                                        std::optional<std::uint64_t> seed = std::nullopt);

CampaignReport run_campaign(const ExperimentConfig& config, const CampaignSettings& settings,
                            std::optional<std::uint64_t> seed = std::nullopt);

nlohmann::json to_json(const CampaignReport& report);

struct Table1Row {
  BoundsRecord bounds;
  bool alternate = false;  // extra interpretation of an ambiguous row
};

/// Rows in the order listed in `<dir>/rows.txt`; lines starting with '+'
/// mark alternates.
std::vector<Table1Row> run_table1(const std::filesystem::path& dir);

}  // namespace collapse
