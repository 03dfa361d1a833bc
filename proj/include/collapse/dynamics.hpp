#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "collapse/core_model.hpp"
#include "collapse/spectral.hpp"
#include "collapse/spectrum.hpp"

namespace collapse {

enum class NoiseChannel : unsigned { thermal = 1u, csl = 2u, backaction = 4u, shot = 8u };

class ChannelSet {
 public:
  constexpr ChannelSet() = default;
  static constexpr ChannelSet all() { return ChannelSet(15u); }
  static constexpr ChannelSet none() { return ChannelSet(0u); }
  static ChannelSet only(NoiseChannel c) { return ChannelSet(static_cast<unsigned>(c)); }
  /// Comma-separated list of thermal, csl, backaction, shot; "all" or "none".
  static ChannelSet parse(const std::string& list);

  bool contains(NoiseChannel c) const { return (bits_ & static_cast<unsigned>(c)) != 0; }
  ChannelSet with(NoiseChannel c) const { return ChannelSet(bits_ | static_cast<unsigned>(c)); }
  ChannelSet without(NoiseChannel c) const { return ChannelSet(bits_ & ~static_cast<unsigned>(c)); }
  std::string to_string() const;
  bool operator==(const ChannelSet&) const = default;

 private:
  constexpr explicit ChannelSet(unsigned bits) : bits_(bits) {}
  unsigned bits_ = 15u;
};

/// Deterministic drive F(t) = amplitude * sin(omega t + phase).
struct InjectedForce {
  double amplitude = 0.0;
  double omega = 0.0;
  double phase = 0.0;
};

struct InitialState {
  enum class Kind { stationary, explicit_state };
  Kind kind = Kind::stationary;
  double x0 = 0.0;
  double p0 = 0.0;

  static InitialState stationary() { return {}; }
  static InitialState at(double x0, double p0) { return {Kind::explicit_state, x0, p0}; }
};

struct SimulationConfig {
  Oscillator oscillator;
  Readout readout;
  CollapseParams collapse;
  double alpha = 0.0;
  double dt = 0.0;
  double duration = 0.0;
  std::uint64_t seed = 0;
  ChannelSet channels = ChannelSet::all();
  std::optional<InjectedForce> injected;
  InitialState initial = InitialState::stationary();

  /// dt > 0, dt <= 2 pi / (50 max(Omega, gamma)), duration >= 100 dt.
  void validate() const;
  std::size_t steps() const;
};

/// Diffusion constants (N^2 s) of the enabled force channels; the shot-noise
/// entry is the white density of p_in (1/2 when enabled).
struct ChannelDiffusion {
  double thermal = 0.0;
  double csl = 0.0;
  double backaction = 0.0;
  double shot = 0.0;

  double force_total() const { return thermal + csl + backaction; }
};

ChannelDiffusion channel_diffusion(const SimulationConfig& config);

struct HomodyneRecord {
  double dt = 0.0;
  std::vector<double> times;
  std::vector<double> x;
  std::vector<double> p;
  std::vector<double> p_out;
  ChannelDiffusion diffusion;
};

struct PhaseSample {
  double t;
  double x;
  double p;
  double p_out;
};

/// chi(omega) = 1 / [m (Omega^2 - omega^2 + i omega gamma)].
std::complex<double> susceptibility(const Oscillator& oscillator, double omega);

/// Integrates the monitored Langevin equations and streams every sample to
/// `sink`. Single-threaded and deterministic for a given config.
void simulate_stream(const SimulationConfig& config, const std::function<void(const PhaseSample&)>& sink);

HomodyneRecord simulate(const SimulationConfig& config);

/// Long-run second moments without storing the record.
struct StationaryMoments {
  double mean_x2 = 0.0;
  double mean_p2 = 0.0;
  std::size_t samples = 0;
};
StationaryMoments simulate_moments(const SimulationConfig& config, std::size_t discard = 0);

/// Noise budget at one frequency; disabled channels are zero.
ForceNoiseTerms analytic_force_terms(const Oscillator& oscillator, double coupling,
                                     const CollapseParams& collapse, double alpha, double omega,
                                     ChannelSet channels = ChannelSet::all());

ForceSpectrum analytic_force_psd(const Oscillator& oscillator, const Readout& readout,
                                 const CollapseParams& collapse, double alpha,
                                 std::span<const double> omegas, ChannelSet channels = ChannelSet::all());

struct SqlOptics {
  double finesse = 0.0;
  double optical_omega = 0.0;            // rad/s
  std::optional<double> wave_number;     // defaults to optical_omega / c
};

struct SqlCoupling {
  double g_sql = 0.0;                  // Hz^1/2 / m
  std::optional<double> power_sql;     // W
};

/// g_SQL = 1 / sqrt(hbar |chi(omega)|), and the injected power that realizes it.
SqlCoupling sql_coupling(const Oscillator& oscillator, double omega,
                         const std::optional<SqlOptics>& optics = std::nullopt);

/// Welch estimate of p_out divided by g^2 |chi(omega)|^2. The DC bin is zero
/// (mean removal); the resolvable band is [2 pi / (N dt), pi / dt].
PsdEstimate infer_force_spectrum(const HomodyneRecord& record, const Readout& readout,
                                 const Oscillator& oscillator, const WelchConfig& welch);

ForceSpectrum to_force_spectrum(const PsdEstimate& estimate);

/// CSV with columns t,x,p_out.
void write_record_csv(std::ostream& out, const HomodyneRecord& record);
HomodyneRecord read_record_csv(std::istream& in);

}  // namespace collapse
