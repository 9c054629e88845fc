#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "bohm/errors.hpp"
#include "bohm/integrator.hpp"

using bohm::Complex;
using bohm::IntegrationConfig;
using bohm::WavePacket;

namespace {

const bohm::Eigenbasis& basis4() {
  static const bohm::Eigenbasis b(bohm::PotentialParams{});
  return b;
}

constexpr Complex kI{0.0, 1.0};

WavePacket periodic() { return WavePacket(basis4(), {kI, 0.0, 0.0, 10.0}); }
WavePacket quasiperiodic() { return WavePacket(basis4(), {kI, 1.0, 0.0, 10.0}); }
WavePacket chaotic() { return WavePacket(basis4(), {kI, 1.0, 4.0, 10.0}); }

double final_x(const WavePacket& p, double x0, double dt, double t_end) {
  IntegrationConfig c;
  c.dt = dt;
  c.n_steps = std::llround(t_end / dt);
  c.record_stride = c.n_steps;
  return integrate(p, x0, c).positions.back();
}

}  // namespace

TEST_CASE("rk4_step has fourth-order local accuracy on a smooth ODE") {
  // ẋ = x cos t, x(t) = exp(sin t)
  const auto f = [](double x, double t) { return x * std::cos(t); };
  const auto run = [&](double dt) {
    double x = 1.0;
    const int n = static_cast<int>(std::lround(2.0 / dt));
    for (int i = 0; i < n; ++i) x = bohm::rk4_step_at(f, x, i * dt, dt);
    return std::abs(x - std::exp(std::sin(2.0)));
  };
  const double ratio = run(0.02) / run(0.01);
  CHECK(ratio == doctest::Approx(16.0).epsilon(0.1));
}

TEST_CASE("stationary state: trajectory stays put") {
  const WavePacket p(basis4(), {1.0, 0.0, 0.0, 0.0});
  IntegrationConfig c;
  c.n_steps = 5000;
  c.record_stride = 7;
  const auto rec = integrate(p, 0.3, c);
  CHECK_FALSE(rec.terminated_early);
  for (double x : rec.positions) CHECK(x == 0.3);
}

TEST_CASE("record layout") {
  IntegrationConfig c;
  c.n_steps = 1003;
  c.record_stride = 10;
  const WavePacket p = quasiperiodic();
  const auto rec = integrate(p, 0.0, c);
  REQUIRE(rec.size() == 102);  // steps 0, 10, …, 1000 and the final 1003
  CHECK(rec.positions.size() == rec.size());
  CHECK(rec.velocities.size() == rec.size());
  CHECK(rec.steps_taken == 1003);
  CHECK(rec.times.back() == doctest::Approx(1.003));
  for (std::size_t i = 1; i < rec.size(); ++i) CHECK(rec.times[i] > rec.times[i - 1]);
  for (std::size_t i = 0; i < rec.size(); i += 17) {
    CHECK(rec.velocities[i] == doctest::Approx(p.velocity(rec.positions[i], rec.times[i])).epsilon(1e-12));
  }
}

TEST_CASE("periodic orbit closes after 2 pi / (E3 - E0)") {
  const WavePacket p = periodic();
  const double T = 2.0 * std::numbers::pi / (basis4().energy(3) - basis4().energy(0));
  const auto per_period = std::llround(T / 1e-3);
  IntegrationConfig c;
  c.dt = T / static_cast<double>(per_period);
  c.n_steps = 20 * per_period;
  const auto rec = integrate(p, 0.0, c);
  REQUIRE(rec.size() == static_cast<std::size_t>(c.n_steps + 1));
  for (std::size_t i = 0; i + per_period < rec.size(); i += 37) {
    CHECK(std::abs(rec.positions[i + per_period] - rec.positions[i]) < 1e-6);
  }
  // it does move
  double lo = 1e9, hi = -1e9;
  for (double x : rec.positions) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  CHECK(hi - lo > 0.05);
}

TEST_CASE("self-convergence is fourth order on the quasiperiodic packet") {
  // dt ≳ 0.01 is still pre-asymptotic for this packet
  const WavePacket p = quasiperiodic();
  const double dt = 0.0025;
  const double ref = final_x(p, 0.0, dt / 16, 10.0);
  const double e1 = std::abs(final_x(p, 0.0, dt, 10.0) - ref);
  const double e2 = std::abs(final_x(p, 0.0, dt / 2, 10.0) - ref);
  MESSAGE("error ratio " << e1 / e2);
  CHECK(std::abs(e1 / e2 - 16.0) < 3.0);
}

TEST_CASE("trajectories never cross") {
  for (const WavePacket& p : {periodic(), quasiperiodic(), chaotic()}) {
    IntegrationConfig c;
    c.n_steps = 100000;
    c.record_stride = 10;
    const auto a = integrate(p, -0.2, c);
    const auto b = integrate(p, 0.0, c);
    const auto d = integrate(p, 0.2, c);
    REQUIRE_FALSE(a.terminated_early);
    REQUIRE_FALSE(b.terminated_early);
    REQUIRE_FALSE(d.terminated_early);
    bool ordered = true;
    for (std::size_t i = 0; i < a.size(); ++i) {
      ordered = ordered && a.positions[i] < b.positions[i] && b.positions[i] < d.positions[i];
    }
    CHECK(ordered);
  }
}

TEST_CASE("density stays well above zero along the preset trajectories") {
  for (const WavePacket& p : {periodic(), quasiperiodic(), chaotic()}) {
    IntegrationConfig c;
    c.n_steps = 200000;
    const auto rec = integrate(p, 0.0, c);
    REQUIRE_FALSE(rec.terminated_early);
    double lowest = 1e300;
    for (std::size_t i = 0; i < rec.size(); ++i) lowest = std::min(lowest, p.density(rec.positions[i], rec.times[i]));
    CHECK(lowest > 1e-10);
  }
}

TEST_CASE("integration is deterministic") {
  IntegrationConfig c;
  c.n_steps = 20000;
  c.record_stride = 3;
  const auto a = integrate(chaotic(), 0.1, c);
  const auto b = integrate(chaotic(), 0.1, c);
  CHECK(a.positions == b.positions);
  CHECK(a.velocities == b.velocities);
  CHECK(a.times == b.times);
}

TEST_CASE("ensemble integration matches single trajectories bit for bit") {
  const WavePacket p = chaotic();
  IntegrationConfig c;
  c.n_steps = 2000;
  const std::vector<double> x0s{-0.7, -0.3, 0.0, 0.25, 0.6, 0.9, 1.1};
  const auto serial = integrate_final_positions(p, x0s, c, 1);
  const auto threaded = integrate_final_positions(p, x0s, c, 3);
  for (std::size_t k = 0; k < x0s.size(); ++k) {
    CHECK(serial[k] == integrate(p, x0s[k], c).positions.back());
    CHECK(threaded[k] == serial[k]);
  }
}

TEST_CASE("a node terminates the record instead of throwing") {
  const WavePacket odd(basis4(), {0.0, 1.0, 0.0, 0.0});
  IntegrationConfig c;
  c.n_steps = 10;
  bohm::TrajectoryRecord rec;
  CHECK_NOTHROW(rec = integrate(odd, 0.0, c));
  CHECK(rec.terminated_early);
  CHECK(rec.termination_reason.find("node") != std::string::npos);
  CHECK(rec.steps_taken == 0);

  const auto ens = integrate_final_positions(odd, std::vector<double>{0.0, 0.5}, c, 1);
  CHECK(std::isnan(ens[0]));
  CHECK(ens[1] == 0.5);
}

TEST_CASE("invalid configurations are rejected") {
  IntegrationConfig c;
  c.dt = 0.0;
  CHECK_THROWS_AS(c.validate(), bohm::ConfigError);
  c = {};
  c.n_steps = 0;
  CHECK_THROWS_AS(integrate(periodic(), 0.0, c), bohm::ConfigError);
  c = {};
  c.record_stride = 0;
  CHECK_THROWS_AS(c.validate(), bohm::ConfigError);
  CHECK_THROWS_AS(bohm::PairIntegrator(periodic(), 0.0, 0.0, IntegrationConfig{}), bohm::ConfigError);
}

TEST_CASE("pair stream: static flow keeps the separation fixed") {
  const WavePacket p(basis4(), {1.0, 0.0, 0.0, 0.0});
  IntegrationConfig c;
  c.n_steps = 1000;
  bohm::PairIntegrator pair(p, 0.3, 1e-6, c);
  int steps = 0;
  while (const auto s = pair.next()) {
    CHECK(s->current == s->previous);
    CHECK(s->previous == doctest::Approx(1e-6).epsilon(1e-9));
    ++steps;
  }
  CHECK(steps == 1000);
  CHECK_FALSE(pair.terminated_early());
}

TEST_CASE("pair stream: fiducial follows the single trajectory and the shadow is renormalized") {
  const WavePacket p = chaotic();
  IntegrationConfig c;
  c.n_steps = 3000;
  c.record_stride = 1;
  const auto rec = integrate(p, 0.0, c);
  bohm::PairIntegrator pair(p, 0.0, 1e-6, c);
  while (const auto s = pair.next()) {
    CHECK(s->fiducial == rec.positions[static_cast<std::size_t>(s->step)]);
    CHECK(s->previous == doctest::Approx(1e-6).epsilon(1e-8));
    CHECK(s->current > 0.0);
  }
  CHECK(pair.steps_taken() == 3000);
}

TEST_CASE("pair stream stops at a node") {
  const WavePacket odd(basis4(), {0.0, 1.0, 0.0, 0.0});
  bohm::PairIntegrator pair(odd, 0.0, 1e-6, IntegrationConfig{1e-3, 10, 1});
  CHECK_FALSE(pair.next().has_value());
  CHECK(pair.terminated_early());
}
