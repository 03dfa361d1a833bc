#include "collapse/dynamics.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "collapse/collapse_bounds.hpp"

namespace collapse {

namespace {

enum StreamId : std::uint64_t { kThermal = 1, kCsl = 2, kBackaction = 3, kShot = 4, kInit = 5 };

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// One generator per noise channel, seeded from (seed, channel), so toggling a
// channel never shifts the draws of another.
class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, std::uint64_t channel)
      : engine_(splitmix64(splitmix64(seed) ^ splitmix64(channel * 0x632be59bd9b4e019ULL))) {}
  double operator()() { return normal_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace

ChannelSet ChannelSet::parse(const std::string& list) {
  if (list == "all") return all();
  if (list == "none" || list.empty()) return none();
  ChannelSet out = none();
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    item = first == std::string::npos ? "" : item.substr(first, last - first + 1);
    if (item == "thermal") out = out.with(NoiseChannel::thermal);
    else if (item == "csl") out = out.with(NoiseChannel::csl);
    else if (item == "backaction") out = out.with(NoiseChannel::backaction);
    else if (item == "shot") out = out.with(NoiseChannel::shot);
    else throw ValidationError(fmt::format("unknown noise channel '{}'", item));
  }
  return out;
}

std::string ChannelSet::to_string() const {
  std::string out;
  auto add = [&](NoiseChannel c, const char* name) {
    if (!contains(c)) return;
    if (!out.empty()) out += ',';
    out += name;
  };
  add(NoiseChannel::thermal, "thermal");
  add(NoiseChannel::csl, "csl");
  add(NoiseChannel::backaction, "backaction");
  add(NoiseChannel::shot, "shot");
  return out.empty() ? "none" : out;
}

void SimulationConfig::validate() const {
  collapse.validate();
  if (!std::isfinite(alpha) || alpha < 0.0) throw ValidationError("simulation: alpha must be >= 0");
  if (!std::isfinite(dt) || dt <= 0.0) throw ValidationError("simulation: dt must be > 0");
  const double fastest = std::max(oscillator.omega(), oscillator.gamma());
  const double dt_max = 2.0 * std::numbers::pi / (50.0 * fastest);
  if (dt > dt_max) {
    throw ValidationError(fmt::format(
        "simulation: dt = {:.4g} s exceeds the resolution limit 2 pi / (50 max(Omega, gamma)) = {:.4g} s", dt,
        dt_max));
  }
  if (!std::isfinite(duration) || duration < 100.0 * dt) {
    throw ValidationError("simulation: duration must be at least 100 dt");
  }
  if (injected && (!std::isfinite(injected->amplitude) || !std::isfinite(injected->omega))) {
    throw ValidationError("simulation: injected force must be finite");
  }
}

std::size_t SimulationConfig::steps() const {
  return static_cast<std::size_t>(std::llround(duration / dt));
}

ChannelDiffusion channel_diffusion(const SimulationConfig& config) {
  ChannelDiffusion d;
  const double g = config.readout.coupling();
  if (config.channels.contains(NoiseChannel::thermal)) d.thermal = thermal_diffusion(config.oscillator);
  if (config.channels.contains(NoiseChannel::csl)) {
    d.csl = csl_diffusion(config.collapse.lambda_csl, config.collapse.r_csl, config.alpha);
  }
  if (config.channels.contains(NoiseChannel::backaction)) d.backaction = 0.5 * constants::hbar * constants::hbar * g * g;
  if (config.channels.contains(NoiseChannel::shot)) d.shot = 0.5;
  return d;
}

std::complex<double> susceptibility(const Oscillator& oscillator, double omega) {
  const double w0 = oscillator.omega();
  const std::complex<double> denom(w0 * w0 - omega * omega, omega * oscillator.gamma());
  return 1.0 / (oscillator.mass() * denom);
}

void simulate_stream(const SimulationConfig& config, const std::function<void(const PhaseSample&)>& sink) {
  config.validate();
  const auto diffusion = channel_diffusion(config);
  const auto& osc = config.oscillator;
  const double m = osc.mass();
  const double dt = config.dt;
  const double g = config.readout.coupling();
  const double decay = std::exp(-osc.gamma() * dt);
  const double spring = m * osc.omega() * osc.omega() * dt;

  NoiseStream thermal(config.seed, kThermal);
  NoiseStream csl(config.seed, kCsl);
  NoiseStream backaction(config.seed, kBackaction);
  NoiseStream shot(config.seed, kShot);
  const double sigma_thermal = std::sqrt(diffusion.thermal / dt);
  const double sigma_csl = std::sqrt(diffusion.csl / dt);
  const double sigma_backaction = std::sqrt(diffusion.backaction / dt);
  const double sigma_shot = std::sqrt(diffusion.shot / dt);
  const bool use_thermal = diffusion.thermal > 0.0;
  const bool use_csl = diffusion.csl > 0.0;
  const bool use_backaction = diffusion.backaction > 0.0;
  const bool use_shot = diffusion.shot > 0.0;

  double x = config.initial.x0;
  double p = config.initial.p0;
  if (config.initial.kind == InitialState::Kind::stationary) {
    // Stationary Ornstein-Uhlenbeck moments of the total white force.
    NoiseStream init(config.seed, kInit);
    const double d = diffusion.force_total();
    const double var_p = d / (2.0 * osc.gamma());
    const double var_x = var_p / (m * m * osc.omega() * osc.omega());
    x = std::sqrt(var_x) * init();
    p = std::sqrt(var_p) * init();
  }

  const std::size_t n = config.steps();
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;
    double out = g * x;
    if (use_shot) out += sigma_shot * shot();
    sink(PhaseSample{t, x, p, out});

    double force = 0.0;
    if (use_thermal) force += sigma_thermal * thermal();
    if (use_csl) force += sigma_csl * csl();
    if (use_backaction) force += sigma_backaction * backaction();
    if (config.injected) {
      force += config.injected->amplitude * std::sin(config.injected->omega * t + config.injected->phase);
    }
    // Semi-implicit Euler-Maruyama with exact exponential damping.
    p = p * decay - spring * x + force * dt;
    x += p * dt / m;
    if (!std::isfinite(x) || !std::isfinite(p)) {
      throw NumericalError(fmt::format("simulation became non-finite at step {} (t = {:.6g} s)", i, t));
    }
  }
}

HomodyneRecord simulate(const SimulationConfig& config) {
  HomodyneRecord record;
  record.dt = config.dt;
  record.diffusion = channel_diffusion(config);
  const std::size_t n = config.steps();
  record.times.reserve(n);
  record.x.reserve(n);
  record.p.reserve(n);
  record.p_out.reserve(n);
  simulate_stream(config, [&record](const PhaseSample& s) {
    record.times.push_back(s.t);
    record.x.push_back(s.x);
    record.p.push_back(s.p);
    record.p_out.push_back(s.p_out);
  });
  return record;
}

StationaryMoments simulate_moments(const SimulationConfig& config, std::size_t discard) {
  StationaryMoments moments;
  std::size_t index = 0;
  simulate_stream(config, [&](const PhaseSample& s) {
    if (index++ < discard) return;
    moments.mean_x2 += s.x * s.x;
    moments.mean_p2 += s.p * s.p;
    ++moments.samples;
  });
  if (moments.samples > 0) {
    moments.mean_x2 /= static_cast<double>(moments.samples);
    moments.mean_p2 /= static_cast<double>(moments.samples);
  }
  return moments;
}

ForceNoiseTerms analytic_force_terms(const Oscillator& oscillator, double coupling,
                                     const CollapseParams& collapse, double alpha, double omega,
                                     ChannelSet channels) {
  if (!(omega >= 0.0) || !std::isfinite(omega)) throw ValidationError("analytic_force_psd: omega must be finite and >= 0");
  if (!(coupling > 0.0)) throw ValidationError("analytic_force_psd: coupling g must be > 0");
  const double chi_abs = std::abs(susceptibility(oscillator, omega));
  ForceNoiseTerms terms;
  if (channels.contains(NoiseChannel::csl)) terms.csl = csl_diffusion(collapse.lambda_csl, collapse.r_csl, alpha);
  if (channels.contains(NoiseChannel::thermal)) terms.thermal = thermal_diffusion(oscillator);
  if (channels.contains(NoiseChannel::shot)) terms.shot = 1.0 / (2.0 * coupling * coupling * chi_abs * chi_abs);
  if (channels.contains(NoiseChannel::backaction)) {
    terms.backaction = 0.5 * constants::hbar * constants::hbar * coupling * coupling;
  }
  terms.sql_total = terms.csl + terms.thermal + constants::hbar / chi_abs;
  return terms;
}

ForceSpectrum analytic_force_psd(const Oscillator& oscillator, const Readout& readout,
                                 const CollapseParams& collapse, double alpha,
                                 std::span<const double> omegas, ChannelSet channels) {
  ForceSpectrum spectrum;
  spectrum.omega.assign(omegas.begin(), omegas.end());
  spectrum.s_f.reserve(omegas.size());
  spectrum.terms.reserve(omegas.size());
  for (double w : omegas) {
    const auto terms = analytic_force_terms(oscillator, readout.coupling(), collapse, alpha, w, channels);
    spectrum.terms.push_back(terms);
    spectrum.s_f.push_back(terms.total());
  }
  return spectrum;
}

SqlCoupling sql_coupling(const Oscillator& oscillator, double omega, const std::optional<SqlOptics>& optics) {
  if (!(omega > 0.0)) throw ValidationError("sql_coupling: omega must be > 0");
  const double chi_abs = std::abs(susceptibility(oscillator, omega));
  SqlCoupling out;
  out.g_sql = 1.0 / std::sqrt(constants::hbar * chi_abs);
  if (optics) {
    if (!(optics->finesse > 0.0) || !(optics->optical_omega > 0.0)) {
      throw ValidationError("sql_coupling: finesse and optical frequency must be > 0");
    }
    const double k = optics->wave_number.value_or(optics->optical_omega / constants::c);
    // g = k sqrt(F P / (hbar omega_opt))  =>  P = g^2 hbar omega_opt / (k^2 F)
    out.power_sql = out.g_sql * out.g_sql * constants::hbar * optics->optical_omega / (k * k * optics->finesse);
  }
  return out;
}

PsdEstimate infer_force_spectrum(const HomodyneRecord& record, const Readout& readout,
                                 const Oscillator& oscillator, const WelchConfig& welch) {
  if (record.p_out.size() < 4096) {
    throw ValidationError(fmt::format("infer_force_spectrum: record has {} samples, need at least 4096",
                                      record.p_out.size()));
  }
  auto estimate = welch_psd(record.p_out, record.dt, welch);
  const double g = readout.coupling();
  // f(omega) = p_out(omega) / (g chi(omega)); the divisor is segment
  // independent, so dividing the averaged periodogram is equivalent.
  for (std::size_t k = 0; k < estimate.values.size(); ++k) {
    if (k == 0) {
      estimate.values[k] = 0.0;
      continue;
    }
    const double chi_abs = std::abs(susceptibility(oscillator, estimate.omega[k]));
    estimate.values[k] /= g * g * chi_abs * chi_abs;
  }
  return estimate;
}

ForceSpectrum to_force_spectrum(const PsdEstimate& estimate) {
  ForceSpectrum spectrum;
  spectrum.omega = estimate.omega;
  spectrum.s_f = estimate.values;
  spectrum.segments = estimate.segments;
  spectrum.relative_standard_error = estimate.relative_standard_error;
  return spectrum;
}

void write_record_csv(std::ostream& out, const HomodyneRecord& record) {
  out << "t,x,p_out\n";
  for (std::size_t i = 0; i < record.times.size(); ++i) {
    out << fmt::format("{:.8e},{:.8e},{:.8e}\n", record.times[i], record.x[i], record.p_out[i]);
  }
}

HomodyneRecord read_record_csv(std::istream& in) {
  HomodyneRecord record;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "t,x,p_out") throw ValidationError(fmt::format("line {}: expected header 't,x,p_out'", line_no));
      header_seen = true;
      continue;
    }
    std::istringstream row(line);
    row.imbue(std::locale::classic());
    double t = 0.0, x = 0.0, p_out = 0.0;
    char c1 = 0, c2 = 0;
    if (!(row >> t >> c1 >> x >> c2 >> p_out) || c1 != ',' || c2 != ',') {
      throw ValidationError(fmt::format("line {}: malformed record row '{}'", line_no, line));
    }
    record.times.push_back(t);
    record.x.push_back(x);
    record.p_out.push_back(p_out);
  }
  if (record.times.size() >= 2) {
    const auto n = record.times.size();
    record.dt = (record.times.back() - record.times.front()) / static_cast<double>(n - 1);
    if (!(record.dt > 0.0)) throw ValidationError("record times must be increasing");
    // Nine significant digits bound how well stored times can agree.
    for (std::size_t i = 0; i < n; ++i) {
      const double expected = record.times.front() + static_cast<double>(i) * record.dt;
      if (std::abs(record.times[i] - expected) > 1e-7 * std::abs(expected) + 1e-6 * record.dt) {
        throw ValidationError(fmt::format("record sampling is not uniform at row {}", i));
      }
    }
  }
  return record;
}

}  // namespace collapse
