#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>

#include "bohm/diagnostics.hpp"
#include "bohm/errors.hpp"

namespace bohm {

namespace {

// FFTW's planner is not re-entrant; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

}  // namespace

double PowerSpectrum::two_sided_total() const {
  if (power.empty()) return 0.0;
  double sum = power.front();
  const std::size_t last = power.size() - 1;
  for (std::size_t k = 1; k < last; ++k) sum += 2.0 * power[k];
  if (last > 0) sum += power[last];  // Nyquist bin appears once
  return sum;
}

std::size_t PowerSpectrum::peak_bin(double f_min) const {
  std::size_t best = 0;
  double best_p = -1.0;
  for (std::size_t k = 0; k < power.size(); ++k) {
    if (frequencies[k] < f_min) continue;
    if (power[k] > best_p) {
      best_p = power[k];
      best = k;
    }
  }
  return best;
}

std::vector<SpectralPeak> spectral_peaks(const PowerSpectrum& s, std::size_t max_peaks, double f_min) {
  std::vector<SpectralPeak> peaks;
  for (std::size_t k = 1; k + 1 < s.power.size(); ++k) {
    if (s.frequencies[k] < f_min) continue;
    if (s.power[k] > s.power[k - 1] && s.power[k] > s.power[k + 1]) {
      peaks.push_back({k, s.frequencies[k], s.power[k]});
    }
  }
  std::sort(peaks.begin(), peaks.end(), [](const auto& a, const auto& b) { return a.power > b.power; });
  if (peaks.size() > max_peaks) peaks.resize(max_peaks);
  return peaks;
}

std::size_t fitting_sample_count(const TrajectoryRecord& record, double sample_dt, std::size_t cap) {
  if (record.size() < 2 || !(sample_dt > 0.0)) return 0;
  const double span = record.times.back() - record.times.front();
  const auto fit = static_cast<std::size_t>(std::floor(span / sample_dt)) + 1;
  return std::bit_floor(std::min(fit, cap));
}

PowerSpectrum power_spectrum_of_series(std::span<const double> series, double sample_dt, Window window) {
  const std::size_t n = series.size();
  if (n < 2 || !std::has_single_bit(n)) throw ConfigError("spectrum needs a power-of-two sample count");
  if (!(sample_dt > 0.0)) throw ConfigError("sample_dt must be positive");

  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);

  std::unique_ptr<double, FftwFree> in(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
  std::unique_ptr<fftw_complex, FftwFree> out(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1))));
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE);
  }
  for (std::size_t j = 0; j < n; ++j) {
    double w = 1.0;
    if (window == Window::Hann) {
      w = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n)));
    }
    in.get()[j] = w * (series[j] - mean);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }

  PowerSpectrum s;
  s.sample_dt = sample_dt;
  s.n_samples = n;
  s.frequencies.resize(n / 2 + 1);
  s.power.resize(n / 2 + 1);
  const double df = s.bin_width();
  for (std::size_t k = 0; k <= n / 2; ++k) {
    const double re = out.get()[k][0];
    const double im = out.get()[k][1];
    s.frequencies[k] = static_cast<double>(k) * df;
    s.power[k] = (re * re + im * im) / static_cast<double>(n);
  }
  return s;
}

PowerSpectrum power_spectrum(const TrajectoryRecord& record, double sample_dt, std::size_t n_samples,
                             Window window) {
  if (n_samples < 2 || !std::has_single_bit(n_samples)) {
    throw ConfigError("spectrum needs a power-of-two sample count");
  }
  if (!(sample_dt > 0.0)) throw ConfigError("sample_dt must be positive");
  if (record.size() < 2) throw TooShort("trajectory too short for a spectrum");
  const double t0 = record.times.front();
  const double needed = static_cast<double>(n_samples - 1) * sample_dt;
  // Allow for the rounding of t0 + j·Δt near the end of the record.
  if (t0 + needed > record.times.back() * (1.0 + 1e-12) + 1e-12) {
    throw TooShort("trajectory does not cover the requested spectrum window");
  }

  std::vector<double> series(n_samples);
  const auto& ts = record.times;
  std::size_t hi = 1;
  for (std::size_t j = 0; j < n_samples; ++j) {
    const double t = std::min(t0 + static_cast<double>(j) * sample_dt, ts.back());
    while (hi + 1 < ts.size() && ts[hi] < t) ++hi;
    const std::size_t lo = hi - 1;
    const double w = (t - ts[lo]) / (ts[hi] - ts[lo]);
    series[j] = record.positions[lo] + w * (record.positions[hi] - record.positions[lo]);
  }
  return power_spectrum_of_series(series, sample_dt, window);
}

}  // namespace bohm
