#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bohm/diagnostics.hpp"

namespace bohm {

/// Which angular frequency the stroboscopic section samples at.
struct StrobeSelector {
  enum class Kind { E3MinusE1, E3MinusE0, Explicit };
  Kind kind = Kind::E3MinusE1;
  double value = 0.0;  // used for Kind::Explicit

  /// Accepts "e3e1", "e3e0" or a positive number.
  static StrobeSelector parse(std::string_view text);
  std::string to_string() const;
  double resolve(const Eigenbasis& basis) const;
};

enum Output : unsigned {
  kTrajectory = 1u << 0,
  kPoincare = 1u << 1,
  kSpectrum = 1u << 2,
  kLyapunov = 1u << 3,
  kPotentials = 1u << 4,
  kAllOutputs = kTrajectory | kPoincare | kSpectrum | kLyapunov | kPotentials,
};

/// Comma-separated list of trajectory, poincare, spectrum, lyapunov, potentials (or "all").
unsigned parse_outputs(std::string_view text);
std::string outputs_to_string(unsigned outputs);

struct ScenarioConfig {
  std::string name = "custom";
  std::string figure;  // figure tag written into every emitted file header

  double xi = 4.0;
  double beta = 1.0;
  double hbar = 1.0;
  double mass = 1.0;
  std::array<Complex, 4> coefficients{};
  double x0 = 0.0;

  double dt = 1e-3;
  std::int64_t steps = 1'000'000;
  std::int64_t record_stride = 1;
  double node_guard = kDefaultNodeGuard;

  StrobeSelector strobe;
  unsigned outputs = kAllOutputs;

  std::int64_t lyapunov_steps = 10'000'000;
  std::int64_t lyapunov_stride = 1000;
  double d0 = 1e-6;

  double spectrum_dt = 0.05;
  std::size_t spectrum_samples = 0;  // 0: largest power of two ≤ 2¹⁶ that fits
  Window window = Window::None;

  double potentials_t = 0.0;
  double potentials_x_min = -2.0;
  double potentials_x_max = 2.0;
  std::int64_t potentials_points = 801;

  /// Throws ConfigError if any field is out of range.
  void validate() const;

  PotentialParams potential_params() const;
  IntegrationConfig trajectory_config() const;
  IntegrationConfig lyapunov_config() const;
};

/// paper-periodic, paper-quasiperiodic, paper-chaotic.
std::vector<std::string> preset_names();
/// Throws UnknownPreset.
ScenarioConfig preset(std::string_view name);
/// Initial positions shown for a preset's phase portraits ({−0.5, 0, 0.5} for the
/// periodic case, {x0} otherwise).
std::vector<double> preset_initial_positions(std::string_view name);
std::string preset_description(std::string_view name);

/// Flat `key = value` text, one setting per line, `#` comments. Complex coefficients
/// are written `re,im`. Keys under derived., artifact., stats., classification. and
/// note. are ignored so that a run manifest can be fed back in as a config.
ScenarioConfig parse_config(std::istream& in, const std::string& source = "<config>");
ScenarioConfig load_config(const std::filesystem::path& path);
std::string format_config(const ScenarioConfig& config);

/// A preset name or a path to a config file.
ScenarioConfig resolve_scenario(const std::string& preset_or_path);

struct DerivedConstants {
  Alphas alphas{};
  std::array<double, 4> epsilon{};
  std::array<double, 4> energy{};
  double f10 = 0.0;  // (E₁ − E₀)/2πħ
  double f21 = 0.0;  // (E₂ − E₁)/2πħ
  double f30 = 0.0;  // (E₃ − E₀)/2πħ
  double f31 = 0.0;  // (E₃ − E₁)/2πħ
  double strobe_omega = 0.0;
};

DerivedConstants derive_constants(const ScenarioConfig& config);

struct Artifact {
  std::string kind;
  std::filesystem::path path;
};

struct RunManifest {
  ScenarioConfig config;
  DerivedConstants derived;
  std::filesystem::path out_dir;
  std::vector<Artifact> artifacts;
  double wall_seconds = 0.0;
  std::int64_t trajectory_steps = 0;
  std::int64_t lyapunov_steps = 0;
  bool terminated_early = false;
  std::string termination_reason;
  std::string error;  // config/IO failure of a sweep member
  std::vector<std::string> notes;  // diagnostics that were skipped and why
  std::optional<double> section_diameter;
  std::optional<std::size_t> section_points;
  std::optional<double> final_lambda;
  std::optional<double> dominant_frequency;
  std::optional<Regime> regime;

  bool ok() const { return error.empty(); }
};

/// Runs the integration and the requested diagnostics, writes the CSVs and
/// manifest.txt into out_dir. Throws ConfigError or IoError; a node is recorded in
/// the manifest and whatever was computed up to it is still written.
RunManifest run(const ScenarioConfig& config, const std::filesystem::path& out_dir);

std::string format_manifest(const RunManifest& manifest);

/// One run per value with coefficient c_index (1 or 2) set to that real value, each
/// in out_dir/c<index>_<value>/. Failures are recorded in the member manifest and the
/// sweep carries on. Writes out_dir/sweep.csv when values is non-empty.
std::vector<RunManifest> sweep(const ScenarioConfig& base, int coefficient_index,
                               std::span<const double> values, const std::filesystem::path& out_dir);

}  // namespace bohm
