#pragma once

#include <vector>

namespace collapse {

/// The four additive force-noise channels at one frequency (N^2 s,
/// double-sided convention).
struct ForceNoiseTerms {
  double csl = 0.0;
  double thermal = 0.0;
  double shot = 0.0;
  double backaction = 0.0;
  /// D_CSL + D_T + hbar / |chi|: the value reached at g = g_SQL.
  double sql_total = 0.0;

  double total() const { return csl + thermal + shot + backaction; }
};

/// Force-noise spectral density on a frequency grid. `terms` is filled for
/// analytic spectra and empty for estimates.
struct ForceSpectrum {
  std::vector<double> omega;  // rad/s
  std::vector<double> s_f;    // N^2 s
  std::vector<ForceNoiseTerms> terms;
  std::size_t segments = 0;                // estimates only
  double relative_standard_error = 0.0;    // estimates only
};

}  // namespace collapse
