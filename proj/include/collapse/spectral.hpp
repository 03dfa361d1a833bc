#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "collapse/spectrum.hpp"

namespace collapse {

enum class Window { rectangular, hann };

std::string to_string(Window window);
Window parse_window(const std::string& name);

struct WelchConfig {
  std::size_t segment_length = 4096;  // power of two
  double overlap = 0.5;               // in [0, 0.9]
  Window window = Window::hann;
  std::size_t min_segments = 8;

  std::size_t hop() const;
  std::size_t segment_count(std::size_t record_length) const;
  void validate(std::size_t record_length) const;
};

/// Averaged periodogram, double-sided, on the non-negative frequency bins
/// 0 .. N/2. White noise of per-sample variance s^2 maps to s^2 dt.
struct PsdEstimate {
  std::vector<double> omega;   // rad/s
  std::vector<double> values;  // input^2 * s
  std::size_t segments = 0;
  std::size_t segment_length = 0;
  double dt = 0.0;
  /// 1 / sqrt(segments): chi-squared statistics of an averaged periodogram bin.
  double relative_standard_error = 0.0;
  /// Variance inflation of a band average relative to n * segments independent
  /// bins, from window-induced bin correlation and segment overlap.
  double averaging_inflation = 1.0;

  double bin_width() const;  // rad/s
  /// Total variance: the two-sided sum of bins times the bin width in Hz.
  double integrated_power() const;
  /// Two-sided power in bins with omega in [lo, hi].
  double integrated_power(double omega_lo, double omega_hi) const;
};

PsdEstimate welch_psd(std::span<const double> samples, double dt, const WelchConfig& config);

struct BinComparison {
  double omega = 0.0;
  double estimate = 0.0;
  double analytic = 0.0;
  double ratio = 0.0;
  double z = 0.0;  // ln(ratio) / relative standard error
};

struct ComparisonReport {
  double omega_min = 0.0;
  double omega_max = 0.0;
  std::vector<BinComparison> bins;
  std::vector<std::size_t> flagged;  // indices into bins with |z| > 4
  double band_ratio = 0.0;           // mean of estimate / analytic
  double band_ratio_standard_error = 0.0;
  double band_z = 0.0;
  bool band_ratio_within_tolerance = false;  // band_ratio in [0.95, 1.05]
};

inline constexpr double kFlagZ = 4.0;
inline constexpr double kBandRatioTolerance = 0.05;

/// Compares an estimate with an analytic spectrum over [omega_min, omega_max].
/// The analytic spectrum is interpolated log-log onto the estimate's bins when
/// the grids differ.
ComparisonReport compare_to_analytic(const PsdEstimate& estimate, const ForceSpectrum& analytic,
                                     double omega_min, double omega_max);

/// CSV with columns omega_rad_s,S_f_N2s. `one_sided` doubles every value.
void write_psd_csv(std::ostream& out, std::span<const double> omega, std::span<const double> values,
                   bool one_sided = false);
/// Reads the CSV written above; '#' lines are skipped.
ForceSpectrum read_psd_csv(std::istream& in);

}  // namespace collapse
