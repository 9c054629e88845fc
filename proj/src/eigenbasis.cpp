#include "bohm/eigenbasis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "bohm/errors.hpp"

namespace bohm {

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

// Trapezoidal nodes per unit of βx. The integrands are entire and decay
// super-exponentially, so the rule converges geometrically.
constexpr int kQuadratureIntervals = 4096;

}  // namespace

void PotentialParams::validate() const {
  if (!positive_finite(xi)) throw ConfigError("xi must be positive and finite");
  if (!positive_finite(beta)) throw ConfigError("beta must be positive and finite");
  if (!positive_finite(hbar)) throw ConfigError("hbar must be positive and finite");
  if (!positive_finite(mass)) throw ConfigError("mass must be positive and finite");
}

double potential(const PotentialParams& p, double x) {
  const double y = p.beta * x;
  const double n1 = static_cast<double>(p.n_param + 1);
  return p.energy_unit() * p.xi * ((p.xi / 8.0) * (std::cosh(4.0 * y) - 1.0) - n1 * std::cosh(2.0 * y));
}

Alphas alphas(double xi) {
  // 4 − 2ξ + ξ² = 3 + (ξ − 1)² > 0.
  return {2.0 * std::sqrt(4.0 - 2.0 * xi + xi * xi), 2.0 * std::sqrt(4.0 + 2.0 * xi + xi * xi)};
}

std::array<EigenState, 4> eigenvalues(const PotentialParams& p) {
  p.validate();
  if (p.n_param != 3) {
    throw ConfigError("closed-form eigenbasis exists only for n = 3 (got n = " +
                      std::to_string(p.n_param) + ")");
  }
  const auto [am, ap] = alphas(p.xi);
  const double xi = p.xi;
  const std::array<double, 4> eps{-5.0 - xi - am, -5.0 + xi - ap, -5.0 - xi + am, -5.0 + xi + ap};
  std::array<EigenState, 4> out{};
  for (int n = 0; n < 4; ++n) {
    out[n] = {n, eps[n], p.energy_unit() * eps[n], n % 2 == 0 ? Parity::Even : Parity::Odd};
  }
  return out;
}

Eigenbasis::Eigenbasis(const PotentialParams& params)
    : params_(params), alphas_(bohm::alphas(params.xi)), states_(eigenvalues(params)) {
  const double xi = params_.xi;
  cosh3_coeff_ = {4.0 - xi + alphas_.minus, 4.0 + xi + alphas_.plus, 4.0 - xi - alphas_.minus,
                  4.0 + xi - alphas_.plus};

  // log|uₙ|² ≤ −(ξ/2) cosh 2y + 6|y| + const. Walk outward past the maximum of that
  // bound until it has dropped by 80.
  const auto log_bound = [xi](double y) { return -0.5 * xi * std::cosh(2.0 * y) + 6.0 * y; };
  const double y_peak = 0.5 * std::asinh(6.0 / xi);
  const double cutoff = log_bound(y_peak) - 80.0;
  double y = y_peak;
  while (log_bound(y) > cutoff) y += 0.01;
  support_half_width_ = y / params_.beta;

  const double h = 2.0 * y / kQuadratureIntervals;
  for (int n = 0; n < 4; ++n) {
    double sum = 0.0;
    for (int k = 1; k < kQuadratureIntervals; ++k) {
      const double u = eigenfunction(n, (-y + k * h) / params_.beta);
      sum += u * u;
    }
    norms_[n] = sum * h / params_.beta;  // endpoint terms are below e⁻⁸⁰
  }
}

void Eigenbasis::check_index(int index) {
  if (index < 0 || index >= kNumStates) {
    throw std::out_of_range("eigenstate index must be in 0..3, got " + std::to_string(index));
  }
}

const EigenState& Eigenbasis::state(int index) const {
  check_index(index);
  return states_[index];
}

BasisJet Eigenbasis::jet(double x) const {
  const double b = params_.beta;
  const double xi = params_.xi;
  const double y = b * x;

  const double e1 = std::exp(y);
  const double ei1 = 1.0 / e1;
  const double e3 = e1 * e1 * e1;
  const double ei3 = ei1 * ei1 * ei1;
  const double c1 = 0.5 * (e1 + ei1);
  const double s1 = 0.5 * (e1 - ei1);
  const double c3 = 0.5 * (e3 + ei3);
  const double s3 = 0.5 * (e3 - ei3);

  BasisJet j;
  const double k = 3.0 * xi;
  for (int n = 0; n < 4; ++n) {
    const double a = cosh3_coeff_[n];
    if (n % 2 == 0) {
      j.phi[n] = k * c1 + a * c3;
      j.dphi[n] = b * (k * s1 + 3.0 * a * s3);
      j.d2phi[n] = b * b * (k * c1 + 9.0 * a * c3);
    } else {
      j.phi[n] = k * s1 + a * s3;
      j.dphi[n] = b * (k * c1 + 3.0 * a * c3);
      j.d2phi[n] = b * b * (k * s1 + 9.0 * a * s3);
    }
  }
  const double c2 = 2.0 * c1 * c1 - 1.0;  // cosh 2y
  j.envelope = std::exp(-0.25 * xi * c2);
  j.dg = -b * xi * s1 * c1;  // −(ξ/2)β sinh 2y
  j.d2g = -b * b * xi * c2;
  return j;
}

double Eigenbasis::eigenfunction(int index, double x) const {
  check_index(index);
  const double y = params_.beta * x;
  const double a = cosh3_coeff_[index];
  const double phi = index % 2 == 0 ? 3.0 * params_.xi * std::cosh(y) + a * std::cosh(3.0 * y)
                                    : 3.0 * params_.xi * std::sinh(y) + a * std::sinh(3.0 * y);
  return std::exp(-0.25 * params_.xi * std::cosh(2.0 * y)) * phi;
}

AmplitudeJet Eigenbasis::eigenfunction_derivatives(int index, double x) const {
  check_index(index);
  const BasisJet j = jet(x);
  const double phi = j.phi[index];
  const double dphi = j.dphi[index];
  const double d2phi = j.d2phi[index];
  return {j.envelope * phi, j.envelope * (dphi + j.dg * phi),
          j.envelope * (d2phi + 2.0 * j.dg * dphi + (j.d2g + j.dg * j.dg) * phi)};
}

double Eigenbasis::norm_squared(int index) const {
  check_index(index);
  return norms_[index];
}

double Eigenbasis::normalized_eigenfunction(int index, double x) const {
  return eigenfunction(index, x) / std::sqrt(norm_squared(index));
}

}  // namespace bohm
