// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.
//
//   acceptance [--only N]... [--full-horizon]

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bohm/errors.hpp"
#include "bohm/scenarios.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace bohm;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::vector<std::string> lines;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    lines.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { lines.push_back("     " + what); }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::int64_t long_horizon = 10'000'000;

fs::path scratch(const std::string& tag) {
  const auto p = fs::temp_directory_path() / ("bohm_acceptance_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// Count of adjacent pairs that break a non-increasing order.
int inversions(const std::vector<double>& v) {
  int n = 0;
  for (std::size_t i = 1; i < v.size(); ++i) n += v[i] > v[i - 1];
  return n;
}

std::string join(const std::vector<double>& v, const char* f = "%.3g") {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : ", ") + fmt(f, x);
  return s;
}

WavePacket packet_of(const ScenarioConfig& c) { return WavePacket(Eigenbasis(c.potential_params()), c.coefficients); }

// Median over peak power on [f_lo, f_hi].
double flatness(const PowerSpectrum& s, double f_lo, double f_hi) {
  std::vector<double> band;
  for (std::size_t k = 0; k < s.power.size(); ++k) {
    if (s.frequencies[k] >= f_lo && s.frequencies[k] <= f_hi) band.push_back(s.power[k]);
  }
  const double peak = *std::max_element(band.begin(), band.end());
  std::nth_element(band.begin(), band.begin() + band.size() / 2, band.end());
  return band[band.size() / 2] / peak;
}

// ---------------------------------------------------------------------------
Outcome eigenbasis_correctness() {
  Outcome o;
  for (double xi : {1.0, 2.0, 4.0, 8.0}) {
    PotentialParams p;
    p.xi = xi;
    const Eigenbasis b(p);
    const double kin = p.hbar * p.hbar / (2 * p.mass);
    const auto grid = oracle::grid_eigenvalues([&](double x) { return b.potential(x); }, kin, -4.0, 4.0, 4000, 4);
    double worst_residual = 0.0, worst_eigen = 0.0;
    for (int n = 0; n < 4; ++n) {
      double scale = 0.0, residual = 0.0;
      for (int i = 0; i <= 600; ++i) {
        const double x = -3.0 + 0.01 * i;
        const auto j = b.eigenfunction_derivatives(n, x);
        scale = std::max(scale, std::abs(j.value));
        residual = std::max(residual, std::abs(-kin * j.second + b.potential(x) * j.value - b.energy(n) * j.value));
      }
      worst_residual = std::max(worst_residual, residual / scale);
      worst_eigen = std::max(worst_eigen, std::abs(b.energy(n) - grid[n]) / std::abs(grid[n]));
    }
    o.check(worst_residual < 1e-9, fmt("xi=%g residual %.2e < 1e-9", xi, worst_residual));
    o.check(worst_eigen < 1e-5, fmt("xi=%g grid eigenvalue rel. error %.2e < 1e-5", xi, worst_eigen));
  }
  return o;
}

// Fundamental period from upward crossings of the mean: the first later crossing at
// which v also returns to its value at the first crossing closes the orbit.
double period_from_crossings(const TrajectoryRecord& r) {
  double mean = 0.0;
  for (double x : r.positions) mean += x;
  mean /= static_cast<double>(r.size());
  std::vector<double> ts, vs;
  for (std::size_t i = 1; i < r.size(); ++i) {
    const double a = r.positions[i - 1] - mean, b = r.positions[i] - mean;
    if (a < 0.0 && b >= 0.0) {
      const double w = a / (a - b);
      ts.push_back(r.times[i - 1] + w * (r.times[i] - r.times[i - 1]));
      vs.push_back(r.velocities[i - 1] + w * (r.velocities[i] - r.velocities[i - 1]));
    }
  }
  if (ts.size() < 3) return std::nan("");
  const auto [vmin, vmax] = std::minmax_element(r.velocities.begin(), r.velocities.end());
  const double tol = 1e-3 * (*vmax - *vmin);
  std::size_t k = 1;
  while (k < ts.size() && std::abs(vs[k] - vs[0]) > tol) ++k;
  if (k == ts.size()) return std::nan("");
  // Average over all whole orbits in the record.
  const std::size_t orbits = (ts.size() - 1) / k;
  return (ts[orbits * k] - ts[0]) / static_cast<double>(orbits);
}

Outcome periodic_regime() {
  Outcome o;
  const auto c = preset("paper-periodic");
  const WavePacket p = packet_of(c);
  const double omega = p.basis().energy(3) - p.basis().energy(0);
  const double T = 2 * kPi * c.hbar / (p.basis().energy(3) - p.basis().energy(0));
  for (double x0 : preset_initial_positions("paper-periodic")) {
    IntegrationConfig ic = c.trajectory_config();
    ic.n_steps = std::llround(50 * T / ic.dt);
    const auto rec = integrate(p, x0, ic);
    o.check(!rec.terminated_early, fmt("x0=%g no node over 50 periods", x0));

    // Closed loop: strobing at any phase of the orbit returns to one point.
    double worst = 0.0;
    for (int k = 0; k < 16; ++k) {
      TrajectoryRecord shifted = rec;
      for (double& t : shifted.times) t -= k * T / 16;
      worst = std::max(worst, poincare_section(shifted, omega).diameter());
    }
    o.check(worst < 1e-3, fmt("x0=%g loop closes: largest section diameter over 16 phases %.2e", x0, worst));

    const double measured = period_from_crossings(rec);
    o.check(std::abs(measured / T - 1) < 1e-3, fmt("x0=%g period %.6f vs 2pi/(E3-E0) = %.6f", x0, measured, T));

    const auto s = poincare_section(rec, omega, p);
    o.check(s.diameter() < 1e-3, fmt("x0=%g section of %zu points, diameter %.2e < 1e-3", x0, s.points.size(), s.diameter()));
  }
  return o;
}

struct RegimeData {
  TrajectoryRecord record;
  PoincareSection section;
  PowerSpectrum spectrum;
  PowerSpectrum spectrum_hann;
  LyapunovSeries lyapunov;
  DerivedConstants derived;
};

RegimeData regime_data(const std::string& name) {
  const auto c = preset(name);
  const WavePacket p = packet_of(c);
  RegimeData d;
  d.derived = derive_constants(c);
  d.record = integrate(p, c.x0, c.trajectory_config());
  d.section = poincare_section(d.record, d.derived.strobe_omega, p);
  const auto n = fitting_sample_count(d.record, c.spectrum_dt);
  d.spectrum = power_spectrum(d.record, c.spectrum_dt, n, Window::None);
  d.spectrum_hann = power_spectrum(d.record, c.spectrum_dt, n, Window::Hann);
  auto lc = c.lyapunov_config();
  lc.n_steps = long_horizon;
  d.lyapunov = lyapunov(p, c.x0, c.d0, lc);
  return d;
}

const RegimeData& quasiperiodic_data() {
  static const RegimeData d = regime_data("paper-quasiperiodic");
  return d;
}

const RegimeData& chaotic_data() {
  static const RegimeData d = regime_data("paper-chaotic");
  return d;
}

double ratio_change(const PoincareSection& s) {
  const auto pts = s.phase_points();
  const std::span<const PhasePoint> all(pts);
  const double half = nearest_neighbor_polygon_ratio(all.first(pts.size() / 2));
  const double full = nearest_neighbor_polygon_ratio(all);
  return std::abs(full / half - 1.0);
}

Outcome quasiperiodic_regime() {
  Outcome o;
  const auto& d = quasiperiodic_data();
  const double change = ratio_change(d.section);
  o.check(change < 0.1, fmt("closed curve: area/perimeter^2 changes %.1f%% when points double (%zu points)",
                            100 * change, d.section.points.size()));
  const double f = d.spectrum.frequencies[d.spectrum.peak_bin(0.5 * d.spectrum.bin_width())];
  o.check(std::abs(f - d.derived.f10) <= d.spectrum.bin_width(),
          fmt("largest peak at %.5f, f10 = %.5f, bin %.5f", f, d.derived.f10, d.spectrum.bin_width()));
  const auto& l = d.lyapunov;
  o.check(!l.terminated_early && std::abs(l.final_lambda) < 5e-4,
          fmt("|lambda(%lld)| = %.2e < 5e-4 (lambda(%lld) = %.2e)", static_cast<long long>(l.steps_taken),
              std::abs(l.final_lambda), static_cast<long long>(l.steps[l.steps.size() / 10]),
              l.lambda_of_n[l.steps.size() / 10]));
  return o;
}

Outcome chaotic_regime() {
  Outcome o;
  const auto& d = chaotic_data();
  const auto& q = quasiperiodic_data();

  const double change = ratio_change(d.section);
  const double dim = box_counting_dimension(d.section.phase_points(), 8);
  o.check(change > 0.1 && dim > 1.5, fmt("2-D scatter: area/perimeter^2 changes %.0f%% when points double, box "
                                         "dimension %.2f (%zu points)",
                                         100 * change, dim, d.section.points.size()));

  const double flat = flatness(d.spectrum_hann, 0.05, 3.0);
  const double flat_q = flatness(q.spectrum_hann, 0.05, 3.0);
  o.check(flat >= 10 * flat_q, fmt("broad band: median/peak on [0.05, 3] is %.2e vs %.2e quasiperiodic (x%.0f)", flat,
                                   flat_q, flat / flat_q));

  const auto peaks = spectral_peaks(d.spectrum, 5, 0.05);
  const auto near = [&](double f) {
    return std::any_of(peaks.begin(), peaks.end(),
                       [&](const SpectralPeak& p) { return std::abs(p.frequency - f) <= 2 * d.spectrum.bin_width(); });
  };
  std::vector<double> pf;
  for (const auto& p : peaks) pf.push_back(p.frequency);
  o.check(near(d.derived.f10) && near(d.derived.f21),
          fmt("top peaks {%s} include f10 = %.4f and f21 = %.4f", join(pf, "%.4f").c_str(), d.derived.f10, d.derived.f21));

  const auto& l = d.lyapunov;
  o.check(!l.terminated_early && l.final_lambda >= 0.002 && l.final_lambda <= 0.010,
          fmt("lambda(%lld) = %.5f in [0.002, 0.010] (d0 = 1e-6, dt = 0.001)", static_cast<long long>(l.steps_taken),
              l.final_lambda));
  return o;
}

Outcome transitions() {
  Outcome o;
  {
    auto base = preset("paper-quasiperiodic");
    base.strobe = StrobeSelector{StrobeSelector::Kind::E3MinusE0};
    base.outputs = kTrajectory | kPoincare;
    const std::vector<double> values{1, 0.5, 0.2, 0.05, 0};
    const auto runs = sweep(base, 1, values, scratch("c1"));
    std::vector<double> diam;
    for (const auto& r : runs) diam.push_back(r.section_diameter.value_or(std::nan("")));
    const bool finite = std::all_of(diam.begin(), diam.end(), [](double v) { return std::isfinite(v); });
    o.check(finite && inversions(diam) <= 1 && diam.back() < 1e-3,
            fmt("c1 in {1, 0.5, 0.2, 0.05, 0}: section diameter {%s}", join(diam).c_str()));
  }
  {
    auto base = preset("paper-chaotic");
    base.outputs = kLyapunov;
    base.lyapunov_steps = long_horizon;
    const std::vector<double> values{4, 2, 1, 0.25, 0};
    const auto runs = sweep(base, 2, values, scratch("c2"));
    std::vector<double> lam;
    for (const auto& r : runs) lam.push_back(r.final_lambda.value_or(std::nan("")));
    const double baseline = quasiperiodic_data().lyapunov.final_lambda;
    const double band = std::max(std::abs(baseline), 5e-4);
    const bool finite = std::all_of(lam.begin(), lam.end(), [](double v) { return std::isfinite(v); });
    o.check(finite && inversions(lam) <= 1 && std::abs(lam.back()) <= band,
            fmt("c2 in {4, 2, 1, 0.25, 0}: lambda {%s}, last within baseline band %.1e", join(lam).c_str(), band));
  }
  return o;
}

Outcome equivariance() {
  Outcome o;
  const auto c = preset("paper-quasiperiodic");
  const WavePacket p = packet_of(c);
  const oracle::GridCdf initial([&](double x) { return p.density(x, 0.0); }, -3.0, 3.0, 60000);
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x0(10000);
  for (double& x : x0) x = initial.inverse(u(rng));
  IntegrationConfig ic = c.trajectory_config();
  ic.n_steps = std::llround(5.0 / ic.dt);
  auto xt = integrate_final_positions(p, x0, ic);
  const auto lost = std::erase_if(xt, [](double x) { return !std::isfinite(x); });
  const oracle::GridCdf final([&](double x) { return p.density(x, 5.0); }, -3.0, 3.0, 60000);
  const double ks0 = oracle::ks_statistic(x0, [&](double x) { return initial.cdf(x); });
  const double ks = oracle::ks_statistic(xt, [&](double x) { return final.cdf(x); });
  o.check(lost == 0, fmt("%zu of 10000 trajectories stopped at a node", lost));
  o.check(ks < 0.02, fmt("KS against |psi(x,5)|^2 is %.4f < 0.02 (at t = 0: %.4f)", ks, ks0));
  return o;
}

Outcome integrator_order() {
  Outcome o;
  const auto c = preset("paper-quasiperiodic");
  const WavePacket p = packet_of(c);
  const auto endpoint = [&](double dt) {
    IntegrationConfig ic;
    ic.dt = dt;
    ic.n_steps = std::llround(10.0 / dt);
    ic.record_stride = ic.n_steps;
    return integrate(p, c.x0, ic).positions.back();
  };
  const double dt = c.dt;
  const double ref = endpoint(dt / 16);
  const double e1 = std::abs(endpoint(dt) - ref);
  const double e2 = std::abs(endpoint(dt / 2) - ref);
  o.check(std::abs(e1 / e2 - 16) <= 3, fmt("dt = %g: error %.3e, dt/2: %.3e, ratio %.2f", dt, e1, e2, e1 / e2));
  // Two coarser rungs of the same ladder, for context.
  const double e4 = std::abs(endpoint(4 * dt) - ref), e8 = std::abs(endpoint(8 * dt) - ref);
  o.note(fmt("dt = %g: error %.3e, dt/2: %.3e, ratio %.2f", 8 * dt, e8, e4, e8 / e4));
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome reproducibility() {
  Outcome o;
  for (const auto& name : preset_names()) {
    auto c = preset(name);
    c.steps = 100000;
    c.lyapunov_steps = 100000;
    const auto a = scratch(name + "_a"), b = scratch(name + "_b");
    run(c, a);
    run(load_config(a / "manifest.txt"), b);
    std::size_t files = 0, same = 0;
    for (const auto& e : fs::directory_iterator(a)) {
      if (e.path().extension() != ".csv") continue;
      ++files;
      same += slurp(e.path()) == slurp(b / e.path().filename());
    }
    o.check(files == 5 && same == files, fmt("%s: %zu of %zu CSVs identical after manifest re-run", name.c_str(), same, files));
  }
  return o;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> body;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::vector<int> only;
  bool full = false;
  app.add_option("--only", only, "run only these criteria");
  app.add_flag("--full-horizon", full, "Lyapunov runs over 5e7 steps");
  CLI11_PARSE(app, argc, argv);
  if (full) long_horizon = 50'000'000;

  const std::vector<Criterion> criteria{
      {1, "eigenbasis correctness", eigenbasis_correctness},
      {2, "periodic regime", periodic_regime},
      {3, "quasiperiodic regime", quasiperiodic_regime},
      {4, "chaotic regime", chaotic_regime},
      {5, "continuity of transitions", transitions},
      {6, "equivariance", equivariance},
      {7, "integrator order", integrator_order},
      {8, "reproducibility", reproducibility},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.body();
    } catch (const std::exception& e) {
      out.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !out.pass;
    std::printf("criterion %d (%s): %s  [%.1f s]\n", c.id, c.title, out.pass ? "PASS" : "FAIL", secs);
    for (const auto& line : out.lines) std::printf("    %s\n", line.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
