#include "bohm/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "bohm/errors.hpp"

namespace bohm {

void IntegrationConfig::validate() const {
  if (!(std::isfinite(dt) && dt > 0.0)) throw ConfigError("dt must be positive");
  if (n_steps < 1) throw ConfigError("n_steps must be at least 1");
  if (record_stride < 1) throw ConfigError("record_stride must be at least 1");
  if (!(node_guard >= 0.0)) throw ConfigError("node_guard must be non-negative");
}

namespace {

double step_time(std::int64_t step, double dt) { return static_cast<double>(step) * dt; }

}  // namespace

StepFrames::StepFrames(const WavePacket& packet, std::int64_t step, double dt)
    : packet_(&packet),
      dt_(dt),
      step_(step),
      start_(packet.at(step_time(step, dt))),
      mid_(packet.at((static_cast<double>(step) + 0.5) * dt)),
      end_(packet.at(step_time(step + 1, dt))) {}

void StepFrames::advance() {
  ++step_;
  start_ = end_;
  mid_ = packet_->at((static_cast<double>(step_) + 0.5) * dt_);
  end_ = packet_->at(step_time(step_ + 1, dt_));
}

double StepFrames::velocity(double x, Stage stage, double node_guard) const {
  switch (stage) {
    case Stage::Start:
      return start_.velocity(x, node_guard);
    case Stage::Mid:
      return mid_.velocity(x, node_guard);
    case Stage::End:
      break;
  }
  return end_.velocity(x, node_guard);
}

TrajectoryRecord integrate(const WavePacket& packet, double x0, const IntegrationConfig& config) {
  config.validate();
  const double guard = config.node_guard;
  const double dt = config.dt;

  TrajectoryRecord rec;
  const std::int64_t expected = config.n_steps / config.record_stride + 2;
  rec.times.reserve(static_cast<std::size_t>(expected));
  rec.positions.reserve(static_cast<std::size_t>(expected));
  rec.velocities.reserve(static_cast<std::size_t>(expected));

  const auto push = [&rec](double t, double x, double v) {
    rec.times.push_back(t);
    rec.positions.push_back(x);
    rec.velocities.push_back(v);
  };

  double x = x0;
  StepFrames frames(packet, 0, dt);
  try {
    push(0.0, x, frames.start().velocity(x, guard));
    for (std::int64_t i = 0; i < config.n_steps; ++i) {
      if (i > 0) frames.advance();
      x = rk4_step([&](double xs, Stage s) { return frames.velocity(xs, s, guard); }, x, dt);
      rec.steps_taken = i + 1;
      const std::int64_t done = i + 1;
      if (done % config.record_stride == 0 || done == config.n_steps) {
        push(step_time(done, dt), x, frames.end().velocity(x, guard));
      }
    }
  } catch (const NodeEncountered& e) {
    rec.terminated_early = true;
    rec.termination_reason = e.what();
  }
  return rec;
}

std::vector<double> integrate_final_positions(const WavePacket& packet, std::span<const double> x0s,
                                              const IntegrationConfig& config, unsigned threads) {
  config.validate();
  std::vector<double> out(x0s.size(), std::numeric_limits<double>::quiet_NaN());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, x0s.size())));

  const auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      double x = x0s[k];
      StepFrames frames(packet, 0, config.dt);
      try {
        for (std::int64_t i = 0; i < config.n_steps; ++i) {
          if (i > 0) frames.advance();
          x = rk4_step([&](double xs, Stage s) { return frames.velocity(xs, s, config.node_guard); },
                       x, config.dt);
        }
        out[k] = x;
      } catch (const NodeEncountered&) {
        // left as NaN
      }
    }
  };

  if (threads == 1) {
    work(0, x0s.size());
    return out;
  }
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (x0s.size() + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
      const std::size_t begin = std::min(x0s.size(), w * chunk);
      const std::size_t end = std::min(x0s.size(), begin + chunk);
      pool.emplace_back(work, begin, end);
    }
  }
  return out;
}

PairIntegrator::PairIntegrator(const WavePacket& packet, double x0, double d0,
                               const IntegrationConfig& config)
    : config_(config),
      frames_(packet, 0, config.dt),
      d0_(d0),
      fiducial_(x0),
      shadow_(x0 + d0) {
  config_.validate();
  if (!(std::isfinite(d0) && d0 > 0.0)) throw ConfigError("separation d0 must be positive");
}

std::optional<SeparationStep> PairIntegrator::next() {
  if (terminated_early_ || step_ >= config_.n_steps) return std::nullopt;
  const double guard = config_.node_guard;
  const auto field = [&](double xs, Stage s) { return frames_.velocity(xs, s, guard); };
  double x_next = 0.0;
  double s_next = 0.0;
  try {
    x_next = rk4_step(field, fiducial_, config_.dt);
    s_next = rk4_step(field, shadow_, config_.dt);
  } catch (const NodeEncountered& e) {
    terminated_early_ = true;
    reason_ = e.what();
    return std::nullopt;
  }
  const double separation = s_next - x_next;
  if (separation == 0.0 || !std::isfinite(separation)) {
    terminated_early_ = true;
    reason_ = "fiducial and shadow trajectories collapsed onto each other";
    return std::nullopt;
  }
  ++step_;
  SeparationStep out{step_, step_time(step_, config_.dt), x_next, std::abs(shadow_ - fiducial_),
                     std::abs(separation)};
  fiducial_ = x_next;
  shadow_ = x_next + std::copysign(d0_, separation);
  frames_.advance();
  return out;
}

}  // namespace bohm
