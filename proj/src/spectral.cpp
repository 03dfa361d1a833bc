#include "collapse/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <istream>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include <fftw3.h>
#include <fmt/format.h>

#include "collapse/errors.hpp"

namespace collapse {

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

// Real-to-complex transform of a fixed length; FFTW planning is serialized.
class RealFft {
 public:
  explicit RealFft(std::size_t n)
      : n_(n),
        in_(static_cast<double*>(fftw_malloc(sizeof(double) * n))),
        out_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)))) {
    std::lock_guard lock(fftw_planner_mutex());
    plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_.get(), out_.get(), FFTW_ESTIMATE);
  }
  ~RealFft() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::span<double> input() { return {in_.get(), n_}; }
  void execute() { fftw_execute(plan_); }
  double power(std::size_t k) const {
    return out_.get()[k][0] * out_.get()[k][0] + out_.get()[k][1] * out_.get()[k][1];
  }

 private:
  std::size_t n_;
  std::unique_ptr<double, FftwFree> in_;
  std::unique_ptr<fftw_complex, FftwFree> out_;
  fftw_plan plan_;
};

std::vector<double> make_window(Window window, std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (window == Window::hann) {
    // Periodic Hann: exact bin-centred behaviour for the DFT.
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n)));
    }
  }
  return w;
}

// rho(tau) = N sum_n w_n^2 w_{n+tau}^2 / (sum w^2)^2, the summed squared
// correlation between all bin pairs of two segments offset by tau samples.
double lag_correlation(const std::vector<double>& w, std::size_t tau, double sum_w2) {
  double s = 0.0;
  for (std::size_t i = 0; i + tau < w.size(); ++i) s += w[i] * w[i] * w[i + tau] * w[i + tau];
  return static_cast<double>(w.size()) * s / (sum_w2 * sum_w2);
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

double log_interp(std::span<const double> x, std::span<const double> y, double xq) {
  const auto it = std::lower_bound(x.begin(), x.end(), xq);
  if (it == x.end()) return std::numeric_limits<double>::quiet_NaN();
  const auto i = static_cast<std::size_t>(it - x.begin());
  if (x[i] == xq) return y[i];
  if (i == 0) return std::numeric_limits<double>::quiet_NaN();
  const double t = std::log(xq / x[i - 1]) / std::log(x[i] / x[i - 1]);
  return std::exp(std::log(y[i - 1]) + t * std::log(y[i] / y[i - 1]));
}

}  // namespace

std::string to_string(Window window) { return window == Window::hann ? "hann" : "rectangular"; }

Window parse_window(const std::string& name) {
  if (name == "hann") return Window::hann;
  if (name == "rectangular") return Window::rectangular;
  throw ValidationError(fmt::format("unknown window '{}' (expected hann or rectangular)", name));
}

std::size_t WelchConfig::hop() const {
  const auto h = static_cast<std::size_t>(std::llround(static_cast<double>(segment_length) * (1.0 - overlap)));
  return std::max<std::size_t>(h, 1);
}

std::size_t WelchConfig::segment_count(std::size_t record_length) const {
  if (record_length < segment_length) return 0;
  return (record_length - segment_length) / hop() + 1;
}

void WelchConfig::validate(std::size_t record_length) const {
  if (!is_power_of_two(segment_length) || segment_length < 8) {
    throw ValidationError(fmt::format("segment length must be a power of two >= 8, got {}", segment_length));
  }
  if (!(overlap >= 0.0 && overlap <= 0.9)) {
    throw ValidationError(fmt::format("overlap must lie in [0, 0.9], got {}", overlap));
  }
  if (record_length < segment_length) {
    throw ValidationError(fmt::format("record too short: {} samples < segment length {}", record_length,
                                      segment_length));
  }
  const auto k = segment_count(record_length);
  if (k < min_segments) {
    throw ValidationError(fmt::format("record too short: {} segments < required {}", k, min_segments));
  }
}

double PsdEstimate::bin_width() const {
  return 2.0 * std::numbers::pi / (static_cast<double>(segment_length) * dt);
}

double PsdEstimate::integrated_power() const {
  return integrated_power(0.0, std::numeric_limits<double>::infinity());
}

double PsdEstimate::integrated_power(double omega_lo, double omega_hi) const {
  const std::size_t nyquist = segment_length / 2;
  double sum = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (omega[k] < omega_lo || omega[k] > omega_hi) continue;
    const bool single = (k == 0 || k == nyquist);
    sum += (single ? 1.0 : 2.0) * values[k];
  }
  return sum * bin_width() / (2.0 * std::numbers::pi);
}

PsdEstimate welch_psd(std::span<const double> samples, double dt, const WelchConfig& config) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("welch_psd: dt must be > 0");
  config.validate(samples.size());
  const std::size_t n = config.segment_length;
  const std::size_t hop = config.hop();
  const std::size_t segments = config.segment_count(samples.size());
  const auto window = make_window(config.window, n);
  const double sum_w2 = std::inner_product(window.begin(), window.end(), window.begin(), 0.0);

  RealFft fft(n);
  std::vector<double> accum(n / 2 + 1, 0.0);
  for (std::size_t s = 0; s < segments; ++s) {
    const auto segment = samples.subspan(s * hop, n);
    const double mean = std::accumulate(segment.begin(), segment.end(), 0.0) / static_cast<double>(n);
    auto in = fft.input();
    for (std::size_t i = 0; i < n; ++i) in[i] = (segment[i] - mean) * window[i];
    fft.execute();
    for (std::size_t k = 0; k < accum.size(); ++k) accum[k] += fft.power(k);
  }

  PsdEstimate est;
  est.segments = segments;
  est.segment_length = n;
  est.dt = dt;
  est.relative_standard_error = 1.0 / std::sqrt(static_cast<double>(segments));
  const double scale = dt / (sum_w2 * static_cast<double>(segments));
  est.omega.resize(accum.size());
  est.values.resize(accum.size());
  for (std::size_t k = 0; k < accum.size(); ++k) {
    est.omega[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / (static_cast<double>(n) * dt);
    est.values[k] = accum[k] * scale;
  }

  double inflation = lag_correlation(window, 0, sum_w2);
  for (std::size_t l = 1; l < segments && l * hop < n; ++l) {
    inflation += 2.0 * (1.0 - static_cast<double>(l) / static_cast<double>(segments)) *
                 lag_correlation(window, l * hop, sum_w2);
  }
  est.averaging_inflation = inflation;
  return est;
}

ComparisonReport compare_to_analytic(const PsdEstimate& estimate, const ForceSpectrum& analytic,
                                     double omega_min, double omega_max) {
  if (!(omega_max > omega_min)) throw ValidationError("compare_to_analytic: empty band");
  if (analytic.omega.empty() || analytic.omega.size() != analytic.s_f.size()) {
    throw ValidationError("compare_to_analytic: analytic spectrum is empty or malformed");
  }
  const bool same_grid = analytic.omega == estimate.omega;
  ComparisonReport report;
  report.omega_min = omega_min;
  report.omega_max = omega_max;
  const double se = estimate.relative_standard_error;
  for (std::size_t k = 0; k < estimate.omega.size(); ++k) {
    const double w = estimate.omega[k];
    if (w < omega_min || w > omega_max || w <= 0.0) continue;
    const double ref = same_grid ? analytic.s_f[k] : log_interp(analytic.omega, analytic.s_f, w);
    if (!std::isfinite(ref) || ref <= 0.0) continue;
    BinComparison bin;
    bin.omega = w;
    bin.estimate = estimate.values[k];
    bin.analytic = ref;
    bin.ratio = bin.estimate / ref;
    bin.z = bin.ratio > 0.0 ? std::log(bin.ratio) / se : -std::numeric_limits<double>::infinity();
    if (std::abs(bin.z) > kFlagZ) report.flagged.push_back(report.bins.size());
    report.bins.push_back(bin);
  }
  if (report.bins.empty()) {
    throw ValidationError(fmt::format(
        "compare_to_analytic: no overlapping bins in band [{:.6g}, {:.6g}] rad/s", omega_min, omega_max));
  }
  double sum = 0.0;
  for (const auto& b : report.bins) sum += b.ratio;
  const double n = static_cast<double>(report.bins.size());
  report.band_ratio = sum / n;
  report.band_ratio_standard_error =
      std::sqrt(estimate.averaging_inflation / (n * static_cast<double>(std::max<std::size_t>(estimate.segments, 1))));
  report.band_z = (report.band_ratio - 1.0) / report.band_ratio_standard_error;
  report.band_ratio_within_tolerance = std::abs(report.band_ratio - 1.0) <= kBandRatioTolerance;
  return report;
}

void write_psd_csv(std::ostream& out, std::span<const double> omega, std::span<const double> values,
                   bool one_sided) {
  if (omega.size() != values.size()) throw ValidationError("write_psd_csv: length mismatch");
  out << "omega_rad_s,S_f_N2s\n";
  const double factor = one_sided ? 2.0 : 1.0;
  for (std::size_t i = 0; i < omega.size(); ++i) {
    out << fmt::format("{:.8e},{:.8e}\n", omega[i], factor * values[i]);
  }
}

ForceSpectrum read_psd_csv(std::istream& in) {
  ForceSpectrum spectrum;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "omega_rad_s,S_f_N2s") {
        throw ValidationError(fmt::format("line {}: expected header 'omega_rad_s,S_f_N2s'", line_no));
      }
      header_seen = true;
      continue;
    }
    std::istringstream row(line);
    row.imbue(std::locale::classic());
    double w = 0.0;
    double s = 0.0;
    char comma = 0;
    if (!(row >> w >> comma >> s) || comma != ',') {
      throw ValidationError(fmt::format("line {}: malformed PSD row '{}'", line_no, line));
    }
    spectrum.omega.push_back(w);
    spectrum.s_f.push_back(s);
  }
  return spectrum;
}

}  // namespace collapse
