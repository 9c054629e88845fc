#include "bohm/wavefield.hpp"

#include <cmath>
#include <limits>

#include "bohm/errors.hpp"

namespace bohm {

TimeSlice::TimeSlice(const Eigenbasis& basis, const std::array<Complex, 4>& coefficients, double t)
    : basis_(&basis), t_(t) {
  const double hbar = basis.params().hbar;
  for (int n = 0; n < 4; ++n) {
    if (coefficients[n] == Complex{}) continue;
    amplitudes_[n] = coefficients[n] * std::polar(1.0, -basis.energy(n) * t / hbar);
  }
}

double TimeSlice::velocity(double x, double node_guard) const {
  // ψ'/ψ = g' + Φ'/Φ with g' real, so only Φ = Σ aₙφₙ enters the phase gradient.
  const BasisJet j = basis_->jet(x);
  Complex phi{};
  Complex dphi{};
  for (int n = 0; n < 4; ++n) {
    phi += amplitudes_[n] * j.phi[n];
    dphi += amplitudes_[n] * j.dphi[n];
  }
  const double phi_norm = std::norm(phi);
  const double density = j.envelope * j.envelope * phi_norm;
  if (!(density > node_guard)) throw NodeEncountered(x, t_, density);
  const auto& p = basis_->params();
  // Im(Φ'/Φ) = Im(Φ' conj Φ) / |Φ|²
  return (p.hbar / p.mass) * (dphi.imag() * phi.real() - dphi.real() * phi.imag()) / phi_norm;
}

FieldSample TimeSlice::sample(double x, double node_guard) const {
  const BasisJet j = basis_->jet(x);
  Complex phi{};
  Complex dphi{};
  Complex d2phi{};
  for (int n = 0; n < 4; ++n) {
    phi += amplitudes_[n] * j.phi[n];
    dphi += amplitudes_[n] * j.dphi[n];
    d2phi += amplitudes_[n] * j.d2phi[n];
  }
  FieldSample s;
  s.psi = j.envelope * phi;
  s.dpsi_dx = j.envelope * (dphi + j.dg * phi);
  s.d2psi_dx2 = j.envelope * (d2phi + 2.0 * j.dg * dphi + (j.d2g + j.dg * j.dg) * phi);
  s.density = std::norm(s.psi);

  const auto& p = basis_->params();
  const double v_pot = basis_->potential(x);
  if (!(s.density > node_guard)) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    s.velocity = nan;
    s.quantum_potential = nan;
    s.effective_potential = nan;
    return s;
  }
  const Complex r1 = s.dpsi_dx / s.psi;
  const Complex r2 = s.d2psi_dx2 / s.psi;
  s.velocity = (p.hbar / p.mass) * r1.imag();
  const double r_ratio = r2.real() + r1.imag() * r1.imag();  // R''/R
  s.quantum_potential = -(p.hbar * p.hbar / (2.0 * p.mass)) * r_ratio;
  s.effective_potential = v_pot + s.quantum_potential;
  return s;
}

WavePacket::WavePacket(const Eigenbasis& basis, const std::array<Complex, 4>& coefficients)
    : basis_(basis), coefficients_(coefficients) {
  bool any = false;
  for (const Complex& c : coefficients_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw ConfigError("wave-packet coefficients must be finite");
    }
    any = any || c != Complex{};
  }
  if (!any) throw ConfigError("wave packet needs at least one nonzero coefficient");
}

double WavePacket::norm_squared() const {
  double sum = 0.0;
  for (int n = 0; n < 4; ++n) sum += std::norm(coefficients_[n]) * basis_.norm_squared(n);
  return sum;
}

Complex WavePacket::psi(double x, double t) const {
  const TimeSlice slice = at(t);
  Complex out{};
  for (int n = 0; n < 4; ++n) {
    if (slice.amplitudes()[n] != Complex{}) out += slice.amplitudes()[n] * basis_.eigenfunction(n, x);
  }
  return out;
}

double WavePacket::quantum_potential(double x, double t, double node_guard) const {
  const FieldSample s = sample(x, t, node_guard);
  if (!(s.density > node_guard)) throw NodeEncountered(x, t, s.density);
  return s.quantum_potential;
}

double WavePacket::effective_potential(double x, double t, double node_guard) const {
  return basis_.potential(x) + quantum_potential(x, t, node_guard);
}

}  // namespace bohm
