#include "collapse/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "collapse/constants.hpp"
#include "collapse/errors.hpp"

namespace collapse {
namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "name", "note",
      "geometry.shape", "geometry.side", "geometry.b_x", "geometry.b_y", "geometry.b_z",
      "geometry.radius", "geometry.thickness", "geometry.from_mass",
      "material.density", "material.lattice_constant", "material.nuclear_mass",
      "material.nuclear_mass_amu",
      "oscillator.mass", "oscillator.omega_hz", "oscillator.omega_rad_s", "oscillator.q",
      "oscillator.gamma_rad_s", "oscillator.temperature", "oscillator.geometry_carries_mass",
      "readout.omega_hz", "readout.omega_rad_s", "readout.coupling", "readout.wave_number",
      "readout.finesse", "readout.photon_flux", "readout.power", "readout.optical_omega_rad_s",
      "collapse.lambda", "collapse.r_csl", "collapse.sigma_dp",
      "model.alpha_method", "model.susceptibility",
      "reference.lambda_t", "reference.lambda_sql",
      "simulation.dt", "simulation.duration", "simulation.seed", "simulation.channels",
      "welch.segment_length", "welch.overlap", "welch.window", "welch.min_segments",
      "campaign.band_min_hz", "campaign.band_max_hz", "campaign.d_csl_over_noise",
      "sweep.output",
      "sweep.axis1.parameter", "sweep.axis1.min", "sweep.axis1.max", "sweep.axis1.points",
      "sweep.axis2.parameter", "sweep.axis2.min", "sweep.axis2.max", "sweep.axis2.points",
  };
  return keys;
}

const std::set<std::string>& sweepable_keys() {
  static const std::set<std::string> keys = {
      "oscillator.mass", "oscillator.omega_hz", "oscillator.omega_rad_s", "oscillator.q",
      "oscillator.gamma_rad_s", "oscillator.temperature", "readout.omega_hz",
      "readout.omega_rad_s", "readout.coupling", "geometry.side", "geometry.b_x",
      "geometry.b_y", "geometry.b_z", "geometry.radius", "geometry.thickness",
      "material.density", "collapse.lambda", "collapse.r_csl",
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Cuts a trailing comment that is not inside double quotes.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

bool valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
  });
}

}  // namespace

ConfigDocument ConfigDocument::parse(const std::string& text, const std::string& source) {
  ConfigDocument doc;
  doc.source_ = source;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  std::size_t line_no = 0;
  auto error = [&](const std::string& msg) {
    return ValidationError(fmt::format("{}:{}: {}", source, line_no, msg));
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw error("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!valid_identifier(section)) throw error(fmt::format("invalid section name '{}'", section));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw error("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!valid_identifier(key)) throw error(fmt::format("invalid key '{}'", key));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    } else if (value.find('"') != std::string::npos) {
      throw error("unbalanced quote");
    }
    if (value.empty()) throw error(fmt::format("empty value for '{}'", key));
    const std::string full = section.empty() ? key : section + "." + key;
    if (known_keys().count(full) == 0) throw error(fmt::format("unknown key '{}'", full));
    if (doc.entries_.count(full) != 0) {
      throw error(fmt::format("duplicate key '{}' (first set on line {})", full,
                              doc.entries_.at(full).line));
    }
    doc.entries_[full] = Entry{value, line_no};
  }
  return doc;
}

ConfigDocument ConfigDocument::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("cannot open config '{}'", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

void ConfigDocument::fail(const std::string& key, const std::string& message) const {
  const auto it = entries_.find(key);
  if (it != entries_.end() && it->second.line > 0) {
    throw ValidationError(fmt::format("{}:{}: {}: {}", source_, it->second.line, key, message));
  }
  throw ValidationError(fmt::format("{}: {}: {}", source_, key, message));
}

std::string ConfigDocument::string(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) fail(key, "required key is missing");
  return it->second.value;
}

std::string ConfigDocument::string_or(const std::string& key, const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second.value;
}

double ConfigDocument::number(const std::string& key) const {
  const std::string text = string(key);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) fail(key, fmt::format("expected a number, got '{}'", text));
  if (!std::isfinite(value)) fail(key, "value must be finite");
  return value;
}

std::optional<double> ConfigDocument::optional_number(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return number(key);
}

bool ConfigDocument::boolean_or(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string text = string(key);
  if (text == "true" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "no" || text == "0") return false;
  fail(key, fmt::format("expected true or false, got '{}'", text));
}

std::uint64_t ConfigDocument::unsigned_integer(const std::string& key) const {
  const std::string text = string(key);
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    fail(key, fmt::format("expected a non-negative integer, got '{}'", text));
  }
  return value;
}

void ConfigDocument::set(const std::string& key, const std::string& value) {
  if (known_keys().count(key) == 0) throw ValidationError(fmt::format("unknown key '{}'", key));
  auto& entry = entries_[key];
  entry.value = value;
}

void ConfigDocument::set_number(const std::string& key, double value) {
  set(key, fmt::format("{:.17g}", value));
}

std::vector<std::string> ConfigDocument::canonical_lines() const {
  std::vector<std::string> lines;
  lines.reserve(entries_.size());
  for (const auto& [key, entry] : entries_) lines.push_back(fmt::format("{} = {}", key, entry.value));
  return lines;
}

namespace {

void require_positive(const ConfigDocument& doc, const std::string& key, double value) {
  if (!(value > 0.0)) {
    throw ValidationError(fmt::format("{}: {} must be positive (got {})", doc.source(), key, value));
  }
}

double positive(const ConfigDocument& doc, const std::string& key) {
  const double v = doc.number(key);
  require_positive(doc, key, v);
  return v;
}

// Exactly one of two alternative keys.
std::string one_of(const ConfigDocument& doc, const std::string& a, const std::string& b,
                   bool required) {
  const bool has_a = doc.has(a);
  const bool has_b = doc.has(b);
  if (has_a && has_b) {
    throw ValidationError(fmt::format("{}: set either {} or {}, not both", doc.source(), a, b));
  }
  if (!has_a && !has_b) {
    if (required) {
      throw ValidationError(fmt::format("{}: one of {} or {} is required", doc.source(), a, b));
    }
    return {};
  }
  return has_a ? a : b;
}

double omega_from(const ConfigDocument& doc, const std::string& hz_key, const std::string& rad_key) {
  const std::string key = one_of(doc, hz_key, rad_key, true);
  const double v = positive(doc, key);
  return key == hz_key ? hz_to_rad_s(v) : v;
}

Material build_material(const ConfigDocument& doc) {
  const double density = positive(doc, "material.density");
  const bool has_a = doc.has("material.lattice_constant");
  const std::string mass_key =
      one_of(doc, "material.nuclear_mass", "material.nuclear_mass_amu", false);
  if (has_a != !mass_key.empty()) {
    throw ValidationError(fmt::format(
        "{}: material.lattice_constant and a nuclear mass must be given together", doc.source()));
  }
  if (!has_a) return Material(density);
  double nuclear_mass = positive(doc, mass_key);
  if (mass_key == "material.nuclear_mass_amu") nuclear_mass *= constants::amu;
  return Material(density, Lattice{positive(doc, "material.lattice_constant"), nuclear_mass});
}

struct GeometryPlan {
  Geometry geometry = Geometry::point();
  bool from_mass = false;
};

// Dimension keys each shape accepts, and which of them is derived when
// geometry.from_mass is set.
struct ShapeKeys {
  std::vector<std::string> keys;
  std::string derived;
};

ShapeKeys shape_keys(const std::string& shape) {
  if (shape == "cube") return {{"geometry.side"}, "geometry.side"};
  if (shape == "cuboid") return {{"geometry.b_x", "geometry.b_y", "geometry.b_z"}, ""};
  if (shape == "disc") return {{"geometry.radius", "geometry.thickness"}, "geometry.radius"};
  if (shape == "sphere") return {{"geometry.radius"}, "geometry.radius"};
  if (shape == "point") return {{}, ""};
  throw ValidationError(
      fmt::format("unknown geometry.shape '{}' (cube, cuboid, disc, sphere, point)", shape));
}

const std::vector<std::string>& all_dimension_keys() {
  static const std::vector<std::string> keys = {"geometry.side", "geometry.b_x", "geometry.b_y",
                                                "geometry.b_z", "geometry.radius",
                                                "geometry.thickness"};
  return keys;
}

GeometryPlan build_geometry(const ConfigDocument& doc, std::optional<double> mass, double density) {
  const std::string shape = doc.string("geometry.shape");
  const ShapeKeys sk = shape_keys(shape);
  const bool from_mass = doc.boolean_or("geometry.from_mass", false);
  for (const auto& key : all_dimension_keys()) {
    const bool accepted = std::find(sk.keys.begin(), sk.keys.end(), key) != sk.keys.end();
    if (doc.has(key) && !accepted) {
      throw ValidationError(fmt::format("{}: {} does not apply to shape '{}'", doc.source(), key, shape));
    }
  }
  if (from_mass) {
    if (sk.derived.empty()) {
      throw ValidationError(fmt::format(
          "{}: geometry.from_mass is not supported for shape '{}'", doc.source(), shape));
    }
    if (doc.has(sk.derived)) {
      throw ValidationError(fmt::format(
          "{}: {} is derived from the mass when geometry.from_mass is set", doc.source(), sk.derived));
    }
    if (!mass) {
      throw ValidationError(
          fmt::format("{}: geometry.from_mass requires oscillator.mass", doc.source()));
    }
  }
  for (const auto& key : sk.keys) {
    if (key != sk.derived || !from_mass) {
      if (!doc.has(key)) doc.string(key);  // raises the missing-key error
    }
  }

  GeometryPlan plan;
  plan.from_mass = from_mass;
  const double volume = from_mass ? *mass / density : 0.0;
  if (shape == "cube") {
    plan.geometry = Geometry::cube(from_mass ? std::cbrt(volume) : positive(doc, "geometry.side"));
  } else if (shape == "cuboid") {
    plan.geometry = Geometry::cuboid(positive(doc, "geometry.b_x"), positive(doc, "geometry.b_y"),
                                     positive(doc, "geometry.b_z"));
  } else if (shape == "disc") {
    const double d = positive(doc, "geometry.thickness");
    const double r = from_mass ? std::sqrt(volume / (constants::pi * d)) : positive(doc, "geometry.radius");
    plan.geometry = Geometry::disc(r, d);
  } else if (shape == "sphere") {
    plan.geometry = Geometry::sphere(from_mass ? std::cbrt(3.0 * volume / (4.0 * constants::pi))
                                               : positive(doc, "geometry.radius"));
  } else {
    plan.geometry = Geometry::point();
  }
  return plan;
}

constexpr double kDampingPairTolerance = 1e-9;

}  // namespace

double ExperimentConfig::require_measurement_omega() const {
  if (!measurement_omega) {
    throw ValidationError(fmt::format(
        "{}: no measurement frequency; set readout.omega_hz or pass --omega-hz", source));
  }
  return *measurement_omega;
}

Readout ExperimentConfig::readout() const {
  const double omega = require_measurement_omega();
  if (coupling && optics) return Readout(*coupling, *optics, omega);
  if (coupling) return Readout(*coupling, omega);
  if (optics) return Readout(*optics, omega);
  return Readout(sql_coupling(oscillator, omega).g_sql, omega);
}

ExperimentConfig build_experiment(const ConfigDocument& doc) {
  ExperimentConfig cfg;
  cfg.document = doc;
  cfg.source = doc.source();
  cfg.name = doc.string_or("name", std::filesystem::path(doc.source()).stem().string());
  cfg.note = doc.string_or("note", "");

  cfg.material = build_material(doc);
  std::optional<double> mass;
  if (doc.has("oscillator.mass")) mass = positive(doc, "oscillator.mass");
  const GeometryPlan plan = build_geometry(doc, mass, cfg.material.density());
  cfg.geometry = plan.geometry;
  if (!mass) {
    if (cfg.geometry.kind() == ShapeKind::point) {
      throw ValidationError(fmt::format("{}: a point geometry requires oscillator.mass", doc.source()));
    }
    mass = cfg.material.density() * cfg.geometry.volume();
  }

  const double omega = omega_from(doc, "oscillator.omega_hz", "oscillator.omega_rad_s");
  const double temperature = doc.number("oscillator.temperature");
  if (!(temperature >= 0.0)) {
    throw ValidationError(fmt::format("{}: oscillator.temperature must be >= 0", doc.source()));
  }
  const auto q = doc.optional_number("oscillator.q");
  const auto gamma = doc.optional_number("oscillator.gamma_rad_s");
  if (!q && !gamma) {
    throw ValidationError(
        fmt::format("{}: one of oscillator.q or oscillator.gamma_rad_s is required", doc.source()));
  }
  if (q) require_positive(doc, "oscillator.q", *q);
  if (gamma) require_positive(doc, "oscillator.gamma_rad_s", *gamma);
  if (q && gamma && std::abs(omega / *gamma - *q) > kDampingPairTolerance * *q) {
    throw ValidationError(fmt::format(
        "{}: oscillator.q = {} is inconsistent with omega / gamma = {}", doc.source(), *q,
        omega / *gamma));
  }
  cfg.oscillator = gamma ? Oscillator(*mass, omega, *gamma, temperature)
                         : Oscillator::from_quality_factor(*mass, omega, *q, temperature);
  cfg.geometry_carries_mass = doc.boolean_or("oscillator.geometry_carries_mass", true);
  cfg.consistency = validate_experiment(cfg.geometry, cfg.material, cfg.oscillator,
                                        cfg.geometry_carries_mass);

  if (!one_of(doc, "readout.omega_hz", "readout.omega_rad_s", false).empty()) {
    cfg.measurement_omega = omega_from(doc, "readout.omega_hz", "readout.omega_rad_s");
  }
  if (doc.has("readout.coupling") && doc.string("readout.coupling") != "sql") {
    cfg.coupling = positive(doc, "readout.coupling");
  }
  const bool any_optics = doc.has("readout.wave_number") || doc.has("readout.finesse") ||
                          doc.has("readout.photon_flux") || doc.has("readout.power") ||
                          doc.has("readout.optical_omega_rad_s");
  if (any_optics) {
    const double k = positive(doc, "readout.wave_number");
    const double finesse = positive(doc, "readout.finesse");
    const std::string flux_key = one_of(doc, "readout.photon_flux", "readout.power", true);
    if (flux_key == "readout.photon_flux") {
      if (doc.has("readout.optical_omega_rad_s")) {
        throw ValidationError(fmt::format(
            "{}: readout.optical_omega_rad_s is only used with readout.power", doc.source()));
      }
      cfg.optics = OpticalSetup{k, finesse, positive(doc, flux_key)};
    } else {
      cfg.optics = OpticalSetup::from_power(k, finesse, positive(doc, flux_key),
                                            positive(doc, "readout.optical_omega_rad_s"));
    }
  }

  cfg.collapse.lambda_csl = doc.optional_number("collapse.lambda").value_or(0.0);
  cfg.collapse.r_csl = doc.optional_number("collapse.r_csl").value_or(kDefaultRcsl);
  cfg.collapse.sigma_dp = doc.optional_number("collapse.sigma_dp");
  cfg.collapse.validate();
  if (cfg.collapse.sigma_dp && cfg.material.lattice() &&
      !cfg.collapse.dp_valid_for(*cfg.material.lattice())) {
    throw ValidationError(fmt::format(
        "{}: collapse.sigma_dp must not exceed lattice_constant / 5", doc.source()));
  }

  cfg.alpha_method = parse_alpha_method(doc.string_or("model.alpha_method", "exact"));
  if (cfg.alpha_method == AlphaMethod::asymptotic &&
      !asymptotic_regime(cfg.geometry, cfg.collapse.r_csl)) {
    throw ValidationError(fmt::format(
        "{}: {} is outside the asymptotic regime for r_CSL = {:.3g} m; use model.alpha_method = exact",
        doc.source(), cfg.geometry.describe(), cfg.collapse.r_csl));
  }
  cfg.mode = parse_susceptibility_mode(doc.string_or("model.susceptibility", "full_lorentzian"));

  cfg.reference.lambda_thermal = doc.optional_number("reference.lambda_t");
  cfg.reference.lambda_measurement = doc.optional_number("reference.lambda_sql");
  return cfg;
}

std::optional<CampaignSettings> build_campaign(const ConfigDocument& doc) {
  if (!doc.has("simulation.dt")) return std::nullopt;
  CampaignSettings s;
  s.dt = positive(doc, "simulation.dt");
  s.duration = positive(doc, "simulation.duration");
  s.seed = doc.has("simulation.seed") ? doc.unsigned_integer("simulation.seed") : 0;
  s.channels = ChannelSet::parse(doc.string_or("simulation.channels", "all"));
  if (doc.has("welch.segment_length")) {
    s.welch.segment_length = static_cast<std::size_t>(doc.unsigned_integer("welch.segment_length"));
  }
  if (doc.has("welch.overlap")) s.welch.overlap = doc.number("welch.overlap");
  if (doc.has("welch.window")) s.welch.window = parse_window(doc.string("welch.window"));
  if (doc.has("welch.min_segments")) {
    s.welch.min_segments = static_cast<std::size_t>(doc.unsigned_integer("welch.min_segments"));
  }
  s.band_min = hz_to_rad_s(positive(doc, "campaign.band_min_hz"));
  s.band_max = hz_to_rad_s(positive(doc, "campaign.band_max_hz"));
  if (!(s.band_max > s.band_min)) {
    throw ValidationError(fmt::format("{}: campaign.band_max_hz must exceed band_min_hz", doc.source()));
  }
  if (s.band_max > constants::pi / s.dt) {
    throw ValidationError(fmt::format("{}: campaign band extends past the Nyquist frequency", doc.source()));
  }
  s.d_csl_over_noise = doc.optional_number("campaign.d_csl_over_noise");
  if (s.d_csl_over_noise) require_positive(doc, "campaign.d_csl_over_noise", *s.d_csl_over_noise);
  if (s.d_csl_over_noise && doc.has("collapse.lambda")) {
    throw ValidationError(fmt::format(
        "{}: set collapse.lambda or campaign.d_csl_over_noise, not both", doc.source()));
  }
  return s;
}

std::vector<double> SweepAxis::values() const {
  std::vector<double> out(points);
  if (points == 1) {
    out[0] = min;
    return out;
  }
  const double lo = std::log(min);
  const double hi = std::log(max);
  for (std::size_t i = 0; i < points; ++i) {
    out[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  out.front() = min;
  out.back() = max;
  return out;
}

std::string to_string(SweepOutput output) {
  switch (output) {
    case SweepOutput::lambda_t: return "lambda_t";
    case SweepOutput::lambda_sql: return "lambda_sql";
    case SweepOutput::sigma_dp: return "sigma_dp";
    case SweepOutput::alpha: return "alpha";
    case SweepOutput::s_f: return "s_f";
  }
  return "unknown";
}

SweepOutput parse_sweep_output(const std::string& name) {
  for (auto o : {SweepOutput::lambda_t, SweepOutput::lambda_sql, SweepOutput::sigma_dp,
                 SweepOutput::alpha, SweepOutput::s_f}) {
    if (to_string(o) == name) return o;
  }
  throw ValidationError(fmt::format(
      "unknown sweep output '{}' (lambda_t, lambda_sql, sigma_dp, alpha, s_f)", name));
}

namespace {

SweepAxis build_axis(const ConfigDocument& doc, const std::string& prefix) {
  SweepAxis axis;
  axis.parameter = doc.string(prefix + ".parameter");
  axis.min = positive(doc, prefix + ".min");
  axis.max = positive(doc, prefix + ".max");
  axis.points = static_cast<std::size_t>(doc.unsigned_integer(prefix + ".points"));
  if (sweepable_keys().count(axis.parameter) == 0) {
    throw ValidationError(fmt::format("{}: '{}' cannot be swept", doc.source(), axis.parameter));
  }
  if (axis.points == 0) {
    throw ValidationError(fmt::format("{}: {}.points must be at least 1", doc.source(), prefix));
  }
  if (axis.points == 1 && axis.min != axis.max) {
    throw ValidationError(fmt::format(
        "{}: a one-point axis needs {}.min == {}.max", doc.source(), prefix, prefix));
  }
  if (axis.points >= 2 && !(axis.max > axis.min)) {
    throw ValidationError(fmt::format("{}: {}.max must exceed {}.min", doc.source(), prefix, prefix));
  }
  return axis;
}

// Keys that together over-determine the swept parameter.
std::vector<std::string> partners(const std::string& key) {
  if (key == "oscillator.q") return {"oscillator.gamma_rad_s"};
  if (key == "oscillator.gamma_rad_s") return {"oscillator.q"};
  if (key == "oscillator.omega_hz") return {"oscillator.omega_rad_s"};
  if (key == "oscillator.omega_rad_s") return {"oscillator.omega_hz"};
  if (key == "readout.omega_hz") return {"readout.omega_rad_s"};
  if (key == "readout.omega_rad_s") return {"readout.omega_hz"};
  return {};
}

void check_independent(const ConfigDocument& doc, const SweepAxis& axis) {
  const std::string& key = axis.parameter;
  auto reject = [&](const std::string& why) {
    throw ValidationError(fmt::format("{}: cannot sweep {}: {}", doc.source(), key, why));
  };
  for (const auto& p : partners(key)) {
    if (doc.has(p)) reject(fmt::format("{} is also set and would be inconsistent", p));
  }
  const bool from_mass = doc.boolean_or("geometry.from_mass", false);
  const std::string shape = doc.string_or("geometry.shape", "");
  const std::string derived = shape.empty() ? "" : shape_keys(shape).derived;
  if (key == "oscillator.mass" && !from_mass && shape != "point") {
    reject("the mass follows from the geometry; set geometry.from_mass = true");
  }
  if (key.rfind("geometry.", 0) == 0) {
    if (from_mass && key == derived) reject("it is derived from the mass");
    if (!from_mass && doc.has("oscillator.mass")) {
      reject("oscillator.mass is fixed and would disagree with the geometry");
    }
  }
  if (key == "material.density" && !from_mass && doc.has("oscillator.mass") && shape != "point") {
    reject("oscillator.mass is fixed and would disagree with density times volume");
  }
}

}  // namespace

SweepSpec build_sweep(const ConfigDocument& doc) {
  SweepSpec spec;
  spec.output = parse_sweep_output(doc.string("sweep.output"));
  spec.axis1 = build_axis(doc, "sweep.axis1");
  const bool has_axis2 = doc.has("sweep.axis2.parameter") || doc.has("sweep.axis2.min") ||
                         doc.has("sweep.axis2.max") || doc.has("sweep.axis2.points");
  if (has_axis2) spec.axis2 = build_axis(doc, "sweep.axis2");
  if (spec.axis2 && spec.axis2->parameter == spec.axis1.parameter) {
    throw ValidationError(fmt::format("{}: both sweep axes vary {}", doc.source(), spec.axis1.parameter));
  }
  std::vector<const SweepAxis*> axes{&spec.axis1};
  if (spec.axis2) axes.push_back(&*spec.axis2);
  for (const SweepAxis* axis : axes) {
    check_independent(doc, *axis);
    if (doc.has(axis->parameter)) {
      throw ValidationError(fmt::format(
          "{}: {} is swept and must not also be fixed", doc.source(), axis->parameter));
    }
  }
  if (spec.axis2) {
    for (const auto& p : partners(spec.axis1.parameter)) {
      if (p == spec.axis2->parameter) {
        throw ValidationError(fmt::format("{}: axes {} and {} describe the same quantity",
                                          doc.source(), spec.axis1.parameter, p));
      }
    }
  }
  spec.base = doc;
  // Validate the base point so configuration errors surface before any work.
  ConfigDocument probe = doc;
  for (const SweepAxis* axis : axes) probe.set_number(axis->parameter, axis->min);
  build_experiment(probe);
  return spec;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
  return build_experiment(ConfigDocument::load(path));
}

SweepSpec load_sweep(const std::filesystem::path& path) {
  return build_sweep(ConfigDocument::load(path));
}

std::filesystem::path bundled_config_dir() { return COLLAPSE_CONFIG_DIR; }

}  // namespace collapse
