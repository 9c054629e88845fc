#include <algorithm>
#include <cmath>
#include <cstdio>

#include "bohm/diagnostics.hpp"

namespace bohm {

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::Periodic:
      return "periodic";
    case Regime::Quasiperiodic:
      return "quasiperiodic";
    case Regime::Chaotic:
      return "chaotic";
    case Regime::Inconclusive:
      break;
  }
  return "inconclusive";
}

Classification classify(const PoincareSection& section, const PowerSpectrum& spectrum,
                        const LyapunovSeries& lyap, const ClassifyOptions& options) {
  Classification c;
  c.final_lambda = lyap.final_lambda;
  c.lambda_threshold = std::max(10.0 * std::abs(options.lambda_baseline), options.min_lambda_threshold);
  c.section_diameter = section.diameter();
  c.section_points = section.points.size();
  if (!spectrum.power.empty()) c.dominant_frequency = spectrum.frequencies[spectrum.peak_bin()];

  const bool separating = c.final_lambda > c.lambda_threshold;
  const bool single_point = c.section_diameter < options.point_tolerance;
  char buf[256];
  std::snprintf(buf, sizeof buf, "lambda=%.6g threshold=%.6g section_diameter=%.6g points=%zu",
                c.final_lambda, c.lambda_threshold, c.section_diameter, c.section_points);
  c.reason = buf;

  if (separating && single_point) {
    c.regime = Regime::Inconclusive;
    c.reason += " (positive exponent but the section is a single point)";
  } else if (separating) {
    c.regime = Regime::Chaotic;
  } else if (single_point) {
    c.regime = Regime::Periodic;
  } else {
    c.regime = Regime::Quasiperiodic;
  }
  return c;
}

}  // namespace bohm
