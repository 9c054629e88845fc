#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bohm/integrator.hpp"

namespace bohm {

// ---------------------------------------------------------------------------
// Stroboscopic sections
// ---------------------------------------------------------------------------

struct PhasePoint {
  double x = 0.0;
  double v = 0.0;
};

struct PoincarePoint {
  std::int64_t m = 0;  // strobe index, t = m·2π/ω
  double t = 0.0;
  double x = 0.0;
  double v = 0.0;
};

struct PoincareSection {
  double strobe_omega = 0.0;
  std::vector<PoincarePoint> points;

  double period() const;
  std::vector<PhasePoint> phase_points() const;
  /// Largest Euclidean distance between two points in the (x, v) plane.
  double diameter() const;
};

/// (x, v) at t = m·2π/ω, m = 0, 1, …, by cubic Hermite interpolation between the
/// bracketing samples (x uses the recorded v as slope, v uses finite-difference slopes).
/// Throws TooShort when the record spans fewer than two periods and ConfigError for a
/// non-positive ω.
PoincareSection poincare_section(const TrajectoryRecord& record, double strobe_omega);

/// Same strobe times and x, but v is the guidance field of `packet` at (x, tₘ), which
/// removes the interpolation error in v.
PoincareSection poincare_section(const TrajectoryRecord& record, double strobe_omega,
                                 const WavePacket& packet);

/// Largest pairwise distance of a planar point set (convex hull, then all hull pairs).
double point_set_diameter(std::span<const PhasePoint> points);

/// Orders points by a greedy nearest-neighbour walk from the first point, closes the
/// polygon, and returns |area| / perimeter² after rescaling both axes to unit range.
/// A sampled closed curve gives a value that settles as points are added; a 2-D
/// scatter gives a value that keeps shrinking because the walk zig-zags.
double nearest_neighbor_polygon_ratio(std::span<const PhasePoint> points);

/// Box-counting dimension between grid sizes 1/cells and 1/(2·cells) of the unit-range
/// rescaled set: log₂(N(2·cells) / N(cells)). ≈ 1 for a curve, ≈ 2 for a filled region.
double box_counting_dimension(std::span<const PhasePoint> points, int cells);

// ---------------------------------------------------------------------------
// Power spectra
// ---------------------------------------------------------------------------

enum class Window { None, Hann };

struct PowerSpectrum {
  std::vector<double> frequencies;  // cycles per unit time, k / (N·Δt), k = 0..N/2
  std::vector<double> power;        // |X_k|² / N of the mean-removed series
  double sample_dt = 0.0;
  std::size_t n_samples = 0;

  double bin_width() const { return 1.0 / (static_cast<double>(n_samples) * sample_dt); }
  /// Sum over all N two-sided bins, reconstructed from the one-sided array.
  double two_sided_total() const;
  /// Bin index of the largest power, ignoring bins below f_min.
  std::size_t peak_bin(double f_min = 0.0) const;
};

struct SpectralPeak {
  std::size_t bin = 0;
  double frequency = 0.0;
  double power = 0.0;
};

/// Local maxima (strictly above both neighbours) sorted by descending power.
std::vector<SpectralPeak> spectral_peaks(const PowerSpectrum& spectrum, std::size_t max_peaks,
                                         double f_min = 0.0);

/// Largest power of two n with (n−1)·sample_dt inside the record, capped at `cap`.
std::size_t fitting_sample_count(const TrajectoryRecord& record, double sample_dt,
                                 std::size_t cap = std::size_t{1} << 16);

/// DFT power of a uniformly sampled series. n = series.size() must be a power of two.
PowerSpectrum power_spectrum_of_series(std::span<const double> series, double sample_dt,
                                       Window window = Window::None);

/// Resamples x(t) at tⱼ = t₀ + j·sample_dt (linear interpolation), j < n_samples, then
/// takes the spectrum of the mean-removed series. n_samples must be a power of two;
/// throws TooShort if the record does not cover (n_samples − 1)·sample_dt.
PowerSpectrum power_spectrum(const TrajectoryRecord& record, double sample_dt,
                             std::size_t n_samples, Window window = Window::None);

// ---------------------------------------------------------------------------
// Largest Lyapunov exponent
// ---------------------------------------------------------------------------

struct LyapunovSeries {
  double d0 = 0.0;
  double dt = 0.0;
  std::vector<std::int64_t> steps;   // n at which λ(n) was stored
  std::vector<double> lambda_of_n;   // λ(n) = (1/nΔt) Σᵢ ln(dᵢ/dᵢ₋₁)
  double final_lambda = 0.0;
  double log_growth_sum = 0.0;       // Σᵢ ln(dᵢ/dᵢ₋₁) up to the last step
  std::int64_t steps_taken = 0;
  bool terminated_early = false;
  std::string termination_reason;
};

/// Running λ(n) from a renormalized fiducial/shadow pair (see PairIntegrator).
/// λ(n) is stored every config.record_stride steps and at the last step.
LyapunovSeries lyapunov(const WavePacket& packet, double x0, double d0,
                        const IntegrationConfig& config);

// ---------------------------------------------------------------------------
// Regime classification
// ---------------------------------------------------------------------------

enum class Regime { Periodic, Quasiperiodic, Chaotic, Inconclusive };

std::string to_string(Regime regime);

struct ClassifyOptions {
  /// |λ| of a quasiperiodic reference run; the chaos threshold is
  /// max(10·|baseline|, min_lambda_threshold).
  double lambda_baseline = 0.0;
  double min_lambda_threshold = 1e-3;
  /// Sections with diameter below this count as a single point.
  double point_tolerance = 1e-3;
};

struct Classification {
  Regime regime = Regime::Inconclusive;
  double final_lambda = 0.0;
  double lambda_threshold = 0.0;
  double section_diameter = 0.0;
  std::size_t section_points = 0;
  double dominant_frequency = 0.0;
  std::string reason;
};

Classification classify(const PoincareSection& section, const PowerSpectrum& spectrum,
                        const LyapunovSeries& lyap, const ClassifyOptions& options = {});

}  // namespace bohm
