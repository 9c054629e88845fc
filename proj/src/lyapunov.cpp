#include <cmath>

#include "bohm/diagnostics.hpp"

namespace bohm {

LyapunovSeries lyapunov(const WavePacket& packet, double x0, double d0, const IntegrationConfig& config) {
  PairIntegrator pair(packet, x0, d0, config);
  LyapunovSeries out;
  out.d0 = d0;
  out.dt = config.dt;
  out.steps.reserve(static_cast<std::size_t>(config.n_steps / config.record_stride + 1));
  out.lambda_of_n.reserve(out.steps.capacity());

  // Neumaier-compensated running sum of ln(dᵢ/dᵢ₋₁).
  double sum = 0.0;
  double carry = 0.0;
  while (const auto step = pair.next()) {
    const double term = std::log(step->current / step->previous);
    const double s = sum + term;
    carry += std::abs(sum) >= std::abs(term) ? (sum - s) + term : (term - s) + sum;
    sum = s;
    if (step->step % config.record_stride == 0 || step->step == config.n_steps) {
      out.steps.push_back(step->step);
      out.lambda_of_n.push_back((sum + carry) / step->t);
    }
  }
  out.steps_taken = pair.steps_taken();
  out.log_growth_sum = sum + carry;
  if (out.steps_taken > 0) {
    out.final_lambda = out.log_growth_sum / (static_cast<double>(out.steps_taken) * config.dt);
    if (out.steps.empty() || out.steps.back() != out.steps_taken) {
      out.steps.push_back(out.steps_taken);
      out.lambda_of_n.push_back(out.final_lambda);
    }
  }
  out.terminated_early = pair.terminated_early();
  out.termination_reason = pair.termination_reason();
  return out;
}

}  // namespace bohm
