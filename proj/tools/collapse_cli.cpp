#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "collapse/config.hpp"
#include "collapse/constants.hpp"
#include "collapse/errors.hpp"
#include "collapse/survey.hpp"

namespace fs = std::filesystem;
using namespace collapse;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct Options {
  std::string config;
  std::string out;
  std::string format = "csv";
  std::string method;
  std::string table_dir;
  std::optional<double> omega_hz;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  bool one_sided = false;
};

// Writes <dir>/<file> when --out is given, stdout otherwise.
class Sink {
 public:
  Sink(const std::string& dir, const std::string& file) {
    if (!dir.empty()) {
      fs::create_directories(dir);
      const fs::path path = fs::path(dir) / file;
      file_.open(path);
      if (!file_) throw ValidationError(fmt::format("cannot write '{}'", path.string()));
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::optional<double> omega_override(const Options& o) {
  if (!o.omega_hz) return std::nullopt;
  return hz_to_rad_s(*o.omega_hz);
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

int cmd_alpha(const Options& o) {
  ExperimentConfig cfg = load_experiment(o.config);
  if (!o.method.empty()) cfg.alpha_method = parse_alpha_method(o.method);
  const AlphaResult a = compute_alpha(cfg.alpha_method, cfg.geometry, cfg.oscillator.mass(), cfg.collapse.r_csl);
  Sink sink(o.out, "alpha." + o.format);
  if (o.format == "json") {
    nlohmann::json j;
    j["provenance"] = provenance_json("alpha", cfg.document);
    j["geometry"] = cfg.geometry.describe();
    j["alpha"] = a.alpha;
    j["method"] = to_string(a.method);
    j["estimated_relative_error"] = a.estimated_relative_error;
    sink.stream() << j.dump(2) << '\n';
  } else {
    write_provenance(sink.stream(), "alpha", cfg.document);
    sink.stream() << "name,geometry,method,alpha,estimated_relative_error\n";
    sink.stream() << fmt::format("{},\"{}\",{},{:.8e},{:.3e}\n", cfg.name, cfg.geometry.describe(),
                                 to_string(a.method), a.alpha, a.estimated_relative_error);
  }
  return 0;
}

int cmd_bounds(const Options& o) {
  const ExperimentConfig cfg = load_experiment(o.config);
  const BoundsRecord rec = run_bounds(cfg, omega_override(o));
  print_warnings(rec.warnings);
  Sink sink(o.out, "bounds." + o.format);
  if (o.format == "json") {
    nlohmann::json j = to_json(rec);
    j["provenance"] = provenance_json("bounds", cfg.document);
    sink.stream() << j.dump(2) << '\n';
  } else {
    write_provenance(sink.stream(), "bounds", cfg.document);
    write_bounds_csv(sink.stream(), {rec});
  }
  return 0;
}

int cmd_sweep(const Options& o) {
  const SweepSpec spec = load_sweep(o.config);
  const SweepResult result = run_sweep(spec, o.threads);
  print_warnings(result.warnings);
  const auto contours = extract_contours(result);
  {
    Sink sink(o.out, "sweep.csv");
    write_provenance(sink.stream(), "sweep", spec.base);
    write_sweep_csv(sink.stream(), result);
  }
  if (!o.out.empty()) {
    Sink sink(o.out, "contours.csv");
    write_provenance(sink.stream(), "sweep", spec.base);
    write_contours_csv(sink.stream(), result, contours);
  }
  return 0;
}

int cmd_simulate(const Options& o) {
  const ConfigDocument doc = ConfigDocument::load(o.config);
  const ExperimentConfig cfg = build_experiment(doc);
  const auto settings = build_campaign(doc);
  if (!settings) throw ValidationError(fmt::format("{}: no [simulation] section", o.config));
  ExperimentConfig run_cfg = cfg;
  if (o.omega_hz) run_cfg.measurement_omega = hz_to_rad_s(*o.omega_hz);
  const CampaignReport rep = run_campaign(run_cfg, *settings, o.seed);
  print_warnings(rep.warnings);

  const fs::path dir = o.out.empty() ? fs::path("campaign_out") : fs::path(o.out);
  fs::create_directories(dir);
  const std::uint64_t seed = rep.simulation.seed;
  {
    std::ofstream f(dir / "record.csv");
    write_provenance(f, "simulate", doc, seed);
    write_record_csv(f, rep.record);
  }
  {
    std::ofstream f(dir / "psd.csv");
    write_provenance(f, "simulate", doc, seed);
    f << "# " << (o.one_sided ? "one-sided" : "double-sided") << " force PSD estimate\n";
    write_psd_csv(f, rep.estimate.omega, rep.estimate.values, o.one_sided);
  }
  {
    std::ofstream f(dir / "analytic.csv");
    write_provenance(f, "simulate", doc, seed);
    f << "# " << (o.one_sided ? "one-sided" : "double-sided") << " analytic force PSD\n";
    write_psd_csv(f, rep.analytic.omega, rep.analytic.s_f, o.one_sided);
  }
  nlohmann::json j = to_json(rep);
  j["provenance"] = provenance_json("simulate", doc, seed);
  {
    std::ofstream f(dir / "report.json");
    f << j.dump(2) << '\n';
  }
  std::cout << fmt::format("band ratio {:.4f} +/- {:.4f}; excess z = {:.2f}; verdict: {}\n",
                           rep.comparison.band_ratio, rep.comparison.band_ratio_standard_error,
                           rep.excess_z, rep.detectable ? "detectable" : "not_detectable");
  return 0;
}

int cmd_table1(const Options& o) {
  const fs::path dir = o.table_dir.empty() ? bundled_config_dir() / "table1" : fs::path(o.table_dir);
  const auto rows = run_table1(dir);
  Sink sink(o.out, "table1." + o.format);
  if (o.format == "json") {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rows) {
      nlohmann::json e = to_json(r.bounds);
      e["alternate"] = r.alternate;
      j.push_back(e);
    }
    sink.stream() << j.dump(2) << '\n';
  } else {
    sink.stream() << "# collapse table1\n# rows: " << (dir / "rows.txt").string() << '\n';
    std::vector<BoundsRecord> records;
    for (const auto& r : rows) records.push_back(r.bounds);
    write_bounds_csv(sink.stream(), records);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detectability bounds and simulated force-noise campaigns for collapse models"};
  app.require_subcommand(1);
  Options o;

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  };

  auto* alpha = app.add_subcommand("alpha", "Geometry factor of the configured body");
  alpha->add_option("--config", o.config, "Experiment config")->required()->check(CLI::ExistingFile);
  alpha->add_option("--method", o.method, "exact, asymptotic or quadrature");
  alpha->add_option("--out", o.out, "Output directory (default stdout)");
  add_format(alpha);

  auto* bounds = app.add_subcommand("bounds", "Lambda_T, Lambda_SQL and Sigma_DP");
  bounds->add_option("--config", o.config, "Experiment config")->required()->check(CLI::ExistingFile);
  bounds->add_option("--omega-hz", o.omega_hz, "Measurement frequency override (Hz)");
  bounds->add_option("--out", o.out, "Output directory (default stdout)");
  add_format(bounds);

  auto* sweep = app.add_subcommand("sweep", "Grid evaluation with decade contours");
  sweep->add_option("--config", o.config, "Sweep config")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", o.out, "Output directory for sweep.csv and contours.csv (default stdout)");
  sweep->add_option("--threads", o.threads, "Worker threads (0: all cores)");

  auto* simulate = app.add_subcommand("simulate", "Simulated homodyne campaign");
  simulate->add_option("--config", o.config, "Campaign config")->required()->check(CLI::ExistingFile);
  simulate->add_option("--seed", o.seed, "Override simulation.seed");
  simulate->add_option("--omega-hz", o.omega_hz, "Measurement frequency override (Hz)");
  simulate->add_option("--out", o.out, "Output directory (default campaign_out)");
  simulate->add_flag("--one-sided", o.one_sided, "Write one-sided PSD values");

  auto* table1 = app.add_subcommand("table1", "Bounds for the bundled reference experiments");
  table1->add_option("--dir", o.table_dir, "Directory containing rows.txt");
  table1->add_option("--out", o.out, "Output directory (default stdout)");
  add_format(table1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*alpha) return cmd_alpha(o);
    if (*bounds) return cmd_bounds(o);
    if (*sweep) return cmd_sweep(o);
    if (*simulate) return cmd_simulate(o);
    if (*table1) return cmd_table1(o);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << fmt::format(" (best estimate {:.6e})", e.best_estimate())
              << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
