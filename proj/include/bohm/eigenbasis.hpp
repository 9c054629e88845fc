#pragma once

#include <array>

namespace bohm {

/// Shape and unit parameters of the bistable potential
///   V(x) = (ħ²β²/2M) ξ [ (ξ/8)(cosh 4βx − 1) − (n+1) cosh 2βx ].
/// Lengths enter only through βx; with β = 1 they are measured in units of 1/β.
struct PotentialParams {
  double xi = 4.0;
  double beta = 1.0;
  int n_param = 3;
  double hbar = 1.0;
  double mass = 1.0;

  /// Throws ConfigError unless ξ, β, ħ, M are all positive and finite.
  void validate() const;

  /// ħ²β²/2M, the factor converting dimensionless ε into energies.
  double energy_unit() const noexcept { return hbar * hbar * beta * beta / (2.0 * mass); }
};

/// Bistable potential. Valid for |βx| ≲ 50; cosh(4βx) overflows near |βx| ≈ 177 and
/// the result is then ±inf (not trapped).
double potential(const PotentialParams& params, double x);

struct Alphas {
  double minus;
  double plus;
};

/// α± = 2 (4 ± 2ξ + ξ²)^½. Both radicands are positive for every real ξ.
Alphas alphas(double xi);

enum class Parity { Even, Odd };

struct EigenState {
  int index = 0;
  double epsilon = 0.0;  // dimensionless eigenvalue
  double energy = 0.0;   // ε · ħ²β²/2M
  Parity parity = Parity::Even;
};

/// Closed-form eigenvalues for n = 3, ordered ε₀ < ε₁ < ε₂ < ε₃.
/// Throws ConfigError for any other n_param.
std::array<EigenState, 4> eigenvalues(const PotentialParams& params);

/// u, u', u'' at one point.
struct AmplitudeJet {
  double value = 0.0;
  double first = 0.0;
  double second = 0.0;
};

/// All four polynomial factors φₙ with derivatives, plus the common Gaussian-like
/// envelope exp(g), g = −(ξ/4) cosh 2βx, evaluated at one x. uₙ = exp(g) φₙ.
struct BasisJet {
  std::array<double, 4> phi{};
  std::array<double, 4> dphi{};
  std::array<double, 4> d2phi{};
  double envelope = 0.0;  // exp(g)
  double dg = 0.0;        // g'
  double d2g = 0.0;       // g''
};

/// The four lowest eigenpairs of the n = 3 bistable potential, in closed form.
///
/// The eigenfunctions are kept unnormalized, exactly
///   uₙ(x) = exp[−(ξ/4) cosh 2βx] φₙ(βx)
///   φ₀ = 3ξ cosh y + (4 − ξ + α₋) cosh 3y      φ₁ = 3ξ sinh y + (4 + ξ + α₊) sinh 3y
///   φ₂ = 3ξ cosh y + (4 − ξ − α₋) cosh 3y      φ₃ = 3ξ sinh y + (4 + ξ − α₊) sinh 3y
/// so that wave-packet coefficients such as "10 u₃" keep their literal meaning.
/// Squared norms ⟨uₙ|uₙ⟩ are computed once at construction for the normalized accessors.
///
/// Immutable after construction; safe to share between threads.
class Eigenbasis {
 public:
  static constexpr int kNumStates = 4;

  /// Throws ConfigError on invalid params or n_param != 3.
  explicit Eigenbasis(const PotentialParams& params);

  const PotentialParams& params() const noexcept { return params_; }
  const Alphas& alphas() const noexcept { return alphas_; }
  const std::array<EigenState, 4>& states() const noexcept { return states_; }
  /// Throws std::out_of_range for index outside 0..3.
  const EigenState& state(int index) const;
  double energy(int index) const { return state(index).energy; }

  double potential(double x) const { return bohm::potential(params_, x); }

  double eigenfunction(int index, double x) const;
  AmplitudeJet eigenfunction_derivatives(int index, double x) const;

  /// ⟨uₙ|uₙ⟩ over the real line.
  double norm_squared(int index) const;
  double normalized_eigenfunction(int index, double x) const;

  /// Shared evaluation of every φₙ at x; one exp() for the hyperbolic functions and
  /// one for the envelope. This is the hot path of the guidance field.
  BasisJet jet(double x) const;

  /// Half-width (in x) outside which every |uₙ|² is below e⁻⁸⁰ of its scale.
  double support_half_width() const noexcept { return support_half_width_; }

 private:
  static void check_index(int index);

  PotentialParams params_;
  Alphas alphas_{};
  std::array<EigenState, 4> states_{};
  std::array<double, 4> cosh3_coeff_{};  // coefficient of cosh 3y / sinh 3y in φₙ
  std::array<double, 4> norms_{};
  double support_half_width_ = 0.0;
};

}  // namespace bohm
