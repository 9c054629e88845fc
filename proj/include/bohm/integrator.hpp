#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bohm/wavefield.hpp"

namespace bohm {

struct IntegrationConfig {
  double dt = 1e-3;
  std::int64_t n_steps = 1;
  std::int64_t record_stride = 1;
  double node_guard = kDefaultNodeGuard;

  /// Throws ConfigError unless dt > 0, n_steps ≥ 1, record_stride ≥ 1.
  void validate() const;
};

/// Samples (tᵢ, x(tᵢ), v(x(tᵢ), tᵢ)) of one guidance-flow trajectory.
/// Step 0 and every record_stride-th step are stored, plus the final step.
struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<double> positions;
  std::vector<double> velocities;
  std::int64_t steps_taken = 0;
  bool terminated_early = false;
  std::string termination_reason;

  std::size_t size() const noexcept { return times.size(); }
};

/// RK4 stage times within one step: t, t + dt/2, t + dt.
enum class Stage { Start, Mid, End };

/// One classical RK4 step of ẋ = f(x, stage).
template <class StageField>
double rk4_step(StageField&& f, double x, double dt) {
  const double k1 = f(x, Stage::Start);
  const double k2 = f(x + 0.5 * dt * k1, Stage::Mid);
  const double k3 = f(x + 0.5 * dt * k2, Stage::Mid);
  const double k4 = f(x + dt * k3, Stage::End);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Same step for an ordinary right-hand side f(x, t).
template <class Field>
double rk4_step_at(Field&& f, double x, double t, double dt) {
  const double mid = t + 0.5 * dt;
  const double end = t + dt;
  return rk4_step(
      [&](double xs, Stage s) {
        return f(xs, s == Stage::Start ? t : (s == Stage::Mid ? mid : end));
      },
      x, dt);
}

/// The three phase slices of the step starting at step index i (t = i·dt).
class StepFrames {
 public:
  StepFrames(const WavePacket& packet, std::int64_t step, double dt);

  /// Moves to step i + 1, reusing the end slice as the new start.
  void advance();

  double velocity(double x, Stage stage, double node_guard) const;
  const TimeSlice& start() const noexcept { return start_; }
  const TimeSlice& end() const noexcept { return end_; }

 private:
  const WavePacket* packet_;
  double dt_;
  std::int64_t step_;
  TimeSlice start_;
  TimeSlice mid_;
  TimeSlice end_;
};

/// Fixed-step RK4 integration of ẋ = v(x, t) from x(0) = x0.
/// A node returns the partial record with terminated_early set; nothing is thrown.
TrajectoryRecord integrate(const WavePacket& packet, double x0, const IntegrationConfig& config);

/// Positions at t = n_steps·dt for many initial positions, integrated concurrently
/// over the shared packet. Trajectories that hit a node yield NaN.
std::vector<double> integrate_final_positions(const WavePacket& packet, std::span<const double> x0s,
                                              const IntegrationConfig& config,
                                              unsigned threads = 0);

/// One Δt of a fiducial/shadow pair.
struct SeparationStep {
  std::int64_t step = 0;      // i, the step just completed (1-based)
  double t = 0.0;             // i·Δt
  double fiducial = 0.0;      // x(tᵢ)
  double previous = 0.0;      // dᵢ₋₁, the renormalized separation (d₀ up to rounding of x + d₀)
  double current = 0.0;       // dᵢ, before renormalization
};

/// Advances a fiducial trajectory and a shadow at distance d₀ one step at a time.
/// After each step the shadow is put back at distance d₀ on the side it drifted to.
class PairIntegrator {
 public:
  /// Throws ConfigError if d0 ≤ 0 or the config is invalid.
  PairIntegrator(const WavePacket& packet, double x0, double d0, const IntegrationConfig& config);

  /// Next step, or std::nullopt once n_steps are done or a node stopped the pair.
  std::optional<SeparationStep> next();

  std::int64_t steps_taken() const noexcept { return step_; }
  double fiducial() const noexcept { return fiducial_; }
  bool terminated_early() const noexcept { return terminated_early_; }
  const std::string& termination_reason() const noexcept { return reason_; }

 private:
  IntegrationConfig config_;
  StepFrames frames_;
  double d0_;
  double fiducial_;
  double shadow_;
  std::int64_t step_ = 0;
  bool terminated_early_ = false;
  std::string reason_;
};

}  // namespace bohm
