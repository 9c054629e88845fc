#pragma once

#include <array>
#include <complex>

#include "bohm/eigenbasis.hpp"

namespace bohm {

using Complex = std::complex<double>;

/// Densities at or below this are treated as wave-function nodes.
inline constexpr double kDefaultNodeGuard = 1e-30;

/// ψ and the Bohmian fields derived from it at one (x, t).
struct FieldSample {
  Complex psi;
  Complex dpsi_dx;
  Complex d2psi_dx2;
  double density = 0.0;
  double velocity = 0.0;
  double quantum_potential = 0.0;
  double effective_potential = 0.0;
};

/// The packet's phased amplitudes cₙ exp(−iEₙt/ħ) frozen at one instant. Evaluating
/// the velocity at many x for the same t (RK stages, paired trajectories) reuses them.
class TimeSlice {
 public:
  TimeSlice(const Eigenbasis& basis, const std::array<Complex, 4>& coefficients, double t);

  double time() const noexcept { return t_; }
  const std::array<Complex, 4>& amplitudes() const noexcept { return amplitudes_; }

  /// v = (ħ/M) Im(∂ₓψ/ψ). Throws NodeEncountered when |ψ|² ≤ node_guard.
  double velocity(double x, double node_guard = kDefaultNodeGuard) const;

  /// Full evaluation; velocity/Q are NaN (not thrown) when the density is at a node.
  FieldSample sample(double x, double node_guard = kDefaultNodeGuard) const;

 private:
  const Eigenbasis* basis_;
  std::array<Complex, 4> amplitudes_{};
  double t_;
};

/// ψ(x,t) = Σₙ cₙ uₙ(x) exp(−iEₙt/ħ) over the closed-form eigenbasis.
/// Coefficients are stored exactly as given; no normalization is applied.
class WavePacket {
 public:
  /// Throws ConfigError if every coefficient is zero or any is non-finite.
  WavePacket(const Eigenbasis& basis, const std::array<Complex, 4>& coefficients);

  const Eigenbasis& basis() const noexcept { return basis_; }
  const std::array<Complex, 4>& coefficients() const noexcept { return coefficients_; }

  /// Σₙ |cₙ|² ⟨uₙ|uₙ⟩ (cross terms vanish by orthogonality). Time independent.
  double norm_squared() const;

  TimeSlice at(double t) const { return TimeSlice(basis_, coefficients_, t); }

  Complex psi(double x, double t) const;
  double density(double x, double t) const { return std::norm(psi(x, t)); }
  /// |ψ|² / norm_squared: a probability density.
  double probability_density(double x, double t) const { return density(x, t) / norm_squared(); }

  double velocity(double x, double t, double node_guard = kDefaultNodeGuard) const {
    return at(t).velocity(x, node_guard);
  }

  /// Q = −(ħ²/2M) R''/R with R''/R = Re(ψ''/ψ) + Im(ψ'/ψ)². Throws NodeEncountered.
  double quantum_potential(double x, double t, double node_guard = kDefaultNodeGuard) const;
  double effective_potential(double x, double t, double node_guard = kDefaultNodeGuard) const;

  FieldSample sample(double x, double t, double node_guard = kDefaultNodeGuard) const {
    return at(t).sample(x, node_guard);
  }

 private:
  Eigenbasis basis_;
  std::array<Complex, 4> coefficients_{};
};

}  // namespace bohm
