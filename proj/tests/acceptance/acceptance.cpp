// Acceptance harness: one PASS/FAIL line per criterion, tolerances pinned here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "collapse/collapse_bounds.hpp"
#include "collapse/config.hpp"
#include "collapse/dynamics.hpp"
#include "collapse/geometry_factors.hpp"
#include "collapse/spectral.hpp"
#include "collapse/survey.hpp"
#include "support/oracles.hpp"

using namespace collapse;

namespace {

constexpr double kR = kDefaultRcsl;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return v;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

void info(const std::string& line) { std::printf("       %s\n", line.c_str()); }

Material silicon_lattice() {
  const double m_a = 28.0855 * constants::amu;
  return Material(2330.0, Lattice{std::cbrt(m_a / 2330.0), m_a});
}

// 1. Bounds table against the published values, factor 2.
Outcome table_regression() {
  struct Published {
    std::string name;
    double lambda_t;
    double lambda_sql;
  };
  const std::vector<Published> published = {
      {"gw_detector", 2e-1, 3e-4},   {"suspended_disc", 5e-6, 1e-7}, {"hypothetical_disc", 2e-10, 2e-9},
      {"sin_membrane", 4e-1, 3e-6}, {"al_membrane", 1e-5, 2e-7},
  };
  const auto start = std::chrono::steady_clock::now();
  const auto rows = run_table1(bundled_config_dir() / "table1");
  const double elapsed = seconds_since(start);
  bool pass = elapsed < 1.0;
  double worst = 1.0;
  for (const auto& p : published) {
    const auto it = std::find_if(rows.begin(), rows.end(),
                                 [&](const Table1Row& r) { return !r.alternate && r.bounds.name == p.name; });
    if (it == rows.end()) {
      info(fmt::format("{}: missing", p.name));
      pass = false;
      continue;
    }
    const auto& b = it->bounds.bounds;
    const double ft = std::max(b.lambda_thermal / p.lambda_t, p.lambda_t / b.lambda_thermal);
    const double fs = std::max(b.lambda_measurement / p.lambda_sql, p.lambda_sql / b.lambda_measurement);
    worst = std::max({worst, ft, fs});
    pass = pass && ft <= 2.0 && fs <= 2.0;
    info(fmt::format("{:<18} Lambda_T {:.3e} (ref {:.0e}, x{:.2f})  Lambda_SQL {:.3e} (ref {:.0e}, x{:.2f})", p.name,
                     b.lambda_thermal, p.lambda_t, ft, b.lambda_measurement, p.lambda_sql, fs));
  }
  for (const auto& r : rows) {
    if (!r.alternate) continue;
    info(fmt::format("alternate {:<8} Lambda_T {:.3e}  Lambda_SQL {:.3e}", r.bounds.name,
                     r.bounds.bounds.lambda_thermal, r.bounds.bounds.lambda_measurement));
  }
  return {pass, fmt::format("worst factor {:.3f} (tol 2), runtime {:.3f} s (tol 1 s)", worst, elapsed)};
}

// 2. Closed forms against quadrature over dimension / r in [1e-3, 1e3].
Outcome exact_vs_quadrature() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::string where;
  for (double s : log_grid(1e-3, 1e3, 50)) {
    const double d = s * kR;
    for (const auto& g : {Geometry::cube(d), Geometry::cuboid(d, 0.5 * d, 2.0 * d), Geometry::disc(d, d),
                          Geometry::disc(d, 1e-3 * kR), Geometry::sphere(d)}) {
      const double m = 1e3 * std::max(g.volume(), 1e-30);
      const double e = rel(alpha_quadrature(g, m, kR, 1e-9).alpha, alpha_exact(g, m, kR).alpha);
      if (e > worst) {
        worst = e;
        where = g.describe();
      }
    }
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-6 && elapsed < 60.0,
          fmt::format("max rel diff {:.2e} at {} (tol 1e-6), runtime {:.2f} s (tol 60 s)", worst, where, elapsed)};
}

// 3. Asymptotic forms inside their stated regime.
Outcome asymptotic_consistency() {
  bool pass = true;
  std::string detail;
  auto check = [&](const std::string& label, const std::vector<Geometry>& shapes) {
    double worst = 0.0;
    for (const auto& g : shapes) {
      const double m = 1e3 * g.volume();
      worst = std::max(worst, rel(alpha_asymptotic(g, m, kR).alpha, alpha_exact(g, m, kR).alpha));
    }
    pass = pass && worst <= 0.01;
    info(fmt::format("{:<6} max rel diff {:.3e} (tol 1e-2){}", label, worst, worst <= 0.01 ? "" : "  <- exceeds"));
    detail += fmt::format("{} {:.2e}; ", label, worst);
  };
  const auto sizes = log_grid(20.0, 1e3, 12);
  std::vector<Geometry> cubes, spheres, discs;
  for (double s : sizes) {
    cubes.push_back(Geometry::cube(s * kR));
    spheres.push_back(Geometry::sphere(s * kR));
    for (double t : {1.0 / 20.0, 1.0 / 100.0}) discs.push_back(Geometry::disc(s * kR, t * kR));
  }
  check("cube", cubes);
  check("sphere", spheres);
  check("disc", discs);
  info("leading corrections at 20 r: cube (1 - 2r/(sqrt(pi) b))^2 = 0.890, sphere 1 - 2r^2/R^2 = 0.995,");
  info("disc (1 - 2r/(sqrt(pi) R))(1 - d^2/(8 r^2)) = 0.943");
  return {pass, detail + "tol 1e-2 at size >= 20 r"};
}

// 4. Point-mass limit at dimension r / 100.
Outcome point_limit() {
  const double d = kR / 100.0;
  double worst = 0.0;
  for (const auto& g : {Geometry::cube(d), Geometry::disc(d, d), Geometry::sphere(d)}) {
    const double m = 1e3 * g.volume();
    const double e = rel(alpha_exact(g, m, kR).alpha, alpha_point_limit(m));
    info(fmt::format("{}: rel diff {:.3e}", g.describe(), e));
    worst = std::max(worst, e);
  }
  return {worst <= 1e-4, fmt::format("max rel diff {:.3e} (tol 1e-4)", worst)};
}

// 5. Thermal bound of a 1 ug silicon cube at 1 Hz, Q = 1e6, T = 1 K.
Outcome microgram_cube() {
  const double m = 1e-9;
  const auto g = Geometry::cube(std::cbrt(m / 2330.0));
  const double alpha = alpha_exact(g, m, kR).alpha;
  const auto osc = Oscillator::from_quality_factor(m, hz_to_rad_s(1.0), 1e6, 1.0);
  const double lt = thermal_bound(osc, alpha, kR);
  const auto rad = Oscillator::from_quality_factor(m, 1.0, 1e6, 1.0);
  info(fmt::format("side {:.4e} m, alpha {:.5e}", std::cbrt(m / 2330.0), alpha));
  info(fmt::format("Omega = 1 rad/s reading: Lambda_T = {:.3f} nHz", thermal_bound(rad, alpha, kR) * 1e9));
  const bool pass = lt >= 0.5e-9 && lt <= 2e-9;
  return {pass, fmt::format("Lambda_T = {:.3f} nHz at Omega/2pi = 1 Hz (tol [0.5, 2] nHz)", lt * 1e9)};
}

// 6. SQL coupling from direct minimization of shot + back-action.
Outcome sql_identity() {
  const auto osc = Oscillator::from_quality_factor(1e-9, hz_to_rad_s(1.0), 1e6, 1.0);
  const ChannelSet added = ChannelSet::only(NoiseChannel::shot).with(NoiseChannel::backaction);
  double worst_g = 0.0;
  double worst_balance = 0.0;
  for (double ratio : log_grid(0.1, 1e4, 31)) {
    const double w = ratio * osc.omega();
    const double chi = oracle::chi_abs(osc.mass(), osc.omega(), osc.gamma(), w);
    const double g0 = 1.0 / std::sqrt(oracle::kHbar * chi);
    auto added_noise = [&](double g) {
      return analytic_force_terms(osc, g, CollapseParams{}, 0.0, w, added).total();
    };
    const double g_min = oracle::golden_section_log(added_noise, 1e-4 * g0, 1e4 * g0);
    const double g_sql = sql_coupling(osc, w).g_sql;
    worst_g = std::max(worst_g, rel(g_sql, g_min));
    const auto t = analytic_force_terms(osc, g_sql, CollapseParams{}, 0.0, w, added);
    worst_balance = std::max(worst_balance, rel(t.shot, t.backaction));
  }
  return {worst_g <= 1e-3 && worst_balance <= 1e-9,
          fmt::format("g_SQL vs minimizer {:.2e} (tol 1e-3), shot/back-action {:.2e} (tol 1e-9)", worst_g,
                      worst_balance)};
}

struct PsdCase {
  std::string label;
  SimulationConfig sim;
  WelchConfig welch;
  double band_lo;
  double band_hi;
};

// 7. Simulated force spectra against the analytic budget.
Outcome simulated_spectra() {
  std::vector<PsdCase> cases;
  {
    const auto doc = ConfigDocument::load(bundled_config_dir() / "desk_campaign.cfg");
    const auto settings = *build_campaign(doc);
    cases.push_back({"desk sphere, all channels, CSL injected", make_simulation_config(build_experiment(doc), settings),
                     settings.welch, settings.band_min, settings.band_max});
  }
  {
    // Thermally dominated low-Q mode around resonance.
    const auto osc = Oscillator::from_quality_factor(1e-12, hz_to_rad_s(100.0), 5.0, 300.0);
    const double w = hz_to_rad_s(150.0);
    SimulationConfig sim{osc, Readout(3.0 * sql_coupling(osc, w).g_sql, w), CollapseParams{}, 0.0, 2e-5, 200.0, 11,
                         ChannelSet::all(), std::nullopt, InitialState::stationary()};
    cases.push_back({"low-Q mode, thermal dominated", sim, WelchConfig{8192, 0.5, Window::hann, 64},
                     hz_to_rad_s(50.0), hz_to_rad_s(400.0)});
  }
  {
    // Free-mass regime, measurement and CSL noise comparable.
    const auto osc = Oscillator::from_quality_factor(1e-15, hz_to_rad_s(10.0), 1e3, 1e-3);
    const double w = hz_to_rad_s(2000.0);
    const double alpha = alpha_point_limit(osc.mass());
    const double chi = oracle::chi_abs(osc.mass(), osc.omega(), osc.gamma(), w);
    const double lambda = oracle::kHbar / chi / ((oracle::kHbar / kR) * (oracle::kHbar / kR) * alpha);
    SimulationConfig sim{osc, Readout(0.5 * sql_coupling(osc, w).g_sql, w), CollapseParams{lambda, kR, {}},
                         alpha, 5e-6, 10.0, 12, ChannelSet::all(), std::nullopt, InitialState::stationary()};
    cases.push_back({"free mass, CSL at measurement level", sim, WelchConfig{16384, 0.5, Window::hann, 64},
                     hz_to_rad_s(1000.0), hz_to_rad_s(3000.0)});
  }
  bool pass = true;
  double worst = 0.0;
  for (const auto& c : cases) {
    const auto start = std::chrono::steady_clock::now();
    const auto record = simulate(c.sim);
    const auto est = infer_force_spectrum(record, c.sim.readout, c.sim.oscillator, c.welch);
    const auto analytic = analytic_force_psd(c.sim.oscillator, c.sim.readout, c.sim.collapse, c.sim.alpha,
                                             est.omega, c.sim.channels);
    const auto cmp = compare_to_analytic(est, analytic, c.band_lo, c.band_hi);
    const double elapsed = seconds_since(start);
    const bool ok = est.segments >= 64 && cmp.band_ratio >= 0.95 && cmp.band_ratio <= 1.05 && elapsed < 120.0;
    pass = pass && ok;
    worst = std::max(worst, std::abs(cmp.band_ratio - 1.0));
    info(fmt::format("{:<40} segments {:>5}, band ratio {:.4f} +- {:.4f}, omega dt <= {:.3f}, {:.1f} s {}", c.label,
                     est.segments, cmp.band_ratio, cmp.band_ratio_standard_error, c.band_hi * c.sim.dt, elapsed,
                     ok ? "ok" : "FAIL"));
  }
  return {pass && cases.size() >= 3,
          fmt::format("{} sets, max |ratio - 1| = {:.4f} (tol 0.05, >= 64 segments, < 120 s each)", cases.size(),
                      worst)};
}

// 8. Thermal-only stationary variance.
Outcome equipartition() {
  const double m = 1e-12, big_omega = 100.0, temperature = 1.0;
  const auto osc = Oscillator::from_quality_factor(m, big_omega, 2.0, temperature);
  SimulationConfig sim{osc, Readout(1.0, big_omega), CollapseParams{}, 0.0, 1e-4, 4000.0, 8,
                       ChannelSet::only(NoiseChannel::thermal), std::nullopt, InitialState::stationary()};
  const auto moments = simulate_moments(sim);
  const double expected = oracle::kBoltzmann * temperature / (m * big_omega * big_omega);
  const double e = rel(moments.mean_x2, expected);
  info(fmt::format("<x^2> = {:.5e}, k_B T / (m Omega^2) = {:.5e}, {} samples", moments.mean_x2, expected,
                   moments.samples));
  return {e <= 0.02, fmt::format("rel diff {:.4f} (tol 0.02)", e)};
}

// 9. Diosi-Penrose closed forms.
Outcome dp_checks() {
  const auto mat = silicon_lattice();
  const double a = mat.require_lattice().constant;
  double worst_q = 0.0;
  for (double f : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}) {
    const double sigma = 0.2 * a * f;
    worst_q = std::max(worst_q, rel(dp_diffusion_quadrature(mat, 1e-9, sigma), dp_diffusion_lattice(mat, 1e-9, sigma)));
  }
  double worst_root = 0.0;
  bool identical = true;
  for (double w : {1.0, 1e2, 1e4}) {
    for (double temperature : {1e-3, 1.0, 300.0}) {
      const auto osc = Oscillator::from_quality_factor(1e-9, 10.0, 1e5, temperature);
      const double sigma = dp_blur_bound(mat, osc, w);
      const double noise = osc.mass() * (oracle::kHbar * w * w + 2.0 * osc.gamma() * oracle::kBoltzmann * temperature);
      const double root = oracle::bisect_log(
          [&](double s) { return oracle::dp_diffusion(2330.0, a, osc.mass(), s) - noise; }, 1e-30, a);
      worst_root = std::max(worst_root, rel(sigma, root));
      for (double m2 : {1e-18, 1e-3, 40.0}) identical = identical && dp_blur_bound(mat, osc.with_mass(m2), w) == sigma;
    }
  }
  return {worst_q <= 1e-6 && worst_root <= 1e-9 && identical,
          fmt::format("closed vs quadrature {:.2e} (tol 1e-6), Sigma_DP vs root {:.2e} (tol 1e-9), mass-invariant {}",
                      worst_q, worst_root, identical ? "yes" : "no")};
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// 10. alpha ~ m^(2/3) for large cubes and spheres, ~ m for thin discs.
Outcome scaling_laws() {
  const double rho = 2330.0;
  const auto masses = log_grid(1e-12, 1e-6, 13);
  auto slope = [&](const std::function<Geometry(double)>& shape, AlphaMethod method) {
    std::vector<double> alphas;
    for (double m : masses) alphas.push_back(compute_alpha(method, shape(m), m, kR).alpha);
    return fitted_slope(masses, alphas);
  };
  auto cube = [&](double m) { return Geometry::cube(std::cbrt(m / rho)); };
  auto sphere = [&](double m) { return Geometry::sphere(std::cbrt(3.0 * m / (4.0 * oracle::kPi * rho))); };
  const double d = 5e-9;
  auto disc = [&](double m) { return Geometry::disc(std::sqrt(m / (rho * oracle::kPi * d)), d); };
  bool pass = true;
  std::string detail;
  for (auto method : {AlphaMethod::asymptotic, AlphaMethod::exact}) {
    const double sc = slope(cube, method), ss = slope(sphere, method), sd = slope(disc, method);
    pass = pass && std::abs(sc - 2.0 / 3.0) <= 0.01 && std::abs(ss - 2.0 / 3.0) <= 0.01 && std::abs(sd - 1.0) <= 0.01;
    detail += fmt::format("{}: cube {:.4f}, sphere {:.4f}, disc {:.4f}; ", to_string(method), sc, ss, sd);
  }
  return {pass, detail + "tol 0.01 about 2/3, 2/3, 1"};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--only", only, "run a single criterion (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "bounds table within factor 2", table_regression},
      {2, "exact alpha vs quadrature", exact_vs_quadrature},
      {3, "asymptotic alpha vs exact", asymptotic_consistency},
      {4, "point-mass limit", point_limit},
      {5, "1 ug cube thermal bound", microgram_cube},
      {6, "SQL coupling identity", sql_identity},
      {7, "simulated vs analytic force PSD", simulated_spectra},
      {8, "thermal equipartition", equipartition},
      {9, "DP closed forms", dp_checks},
      {10, "alpha mass scaling", scaling_laws},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, fmt::format("exception: {}", e.what())};
    }
    std::printf("%s [%d] %s: %s\n", out.pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
