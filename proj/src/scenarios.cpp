#include "bohm/scenarios.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "bohm/errors.hpp"

namespace bohm {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

constexpr Complex kI{0.0, 1.0};

struct PresetEntry {
  std::string_view name;
  std::string_view figure;
  std::string_view description;
  std::array<Complex, 4> coefficients;
};

const std::array<PresetEntry, 3>& preset_table() {
  static const std::array<PresetEntry, 3> table{{
      {"paper-periodic", "Fig. 1", "psi(x,0) = i u0 + 10 u3; periodic about the origin",
       {kI, 0.0, 0.0, 10.0}},
      {"paper-quasiperiodic", "Fig. 2", "psi(x,0) = i u0 + u1 + 10 u3; quasiperiodic",
       {kI, 1.0, 0.0, 10.0}},
      {"paper-chaotic", "Fig. 3", "psi(x,0) = i u0 + u1 + 4 u2 + 10 u3; chaotic",
       {kI, 1.0, 4.0, 10.0}},
  }};
  return table;
}

const PresetEntry& find_preset(std::string_view name) {
  for (const auto& p : preset_table()) {
    if (p.name == name) return p;
  }
  throw UnknownPreset(std::string(name));
}

// Figure panel for each emitted file, given the preset's figure.
std::string figure_tag(const ScenarioConfig& c, Output kind) {
  if (c.figure.empty()) return "none";
  const bool fig1 = c.figure == "Fig. 1";
  switch (kind) {
    case kTrajectory:
      return c.figure + (fig1 ? "(b)" : "(a)");
    case kPoincare:
      return c.figure + (fig1 ? "(b) stroboscopic" : "(b)");
    case kSpectrum:
      return c.figure + "(c)";
    case kLyapunov:
      return "Fig. 4";
    case kPotentials:
      return "Fig. 1(a)";
    default:
      return "none";
  }
}

class CsvFile {
 public:
  CsvFile(const std::filesystem::path& path, const std::string& header_comment, const char* columns)
      : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw IoError("cannot open " + path.string() + " for writing");
    out_ << "# " << header_comment << '\n' << columns << '\n';
  }

  void row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      if (!first) out_ << ',';
      first = false;
      std::snprintf(buf_, sizeof buf_, "%.17g", v);
      out_ << buf_;
    }
    out_ << '\n';
  }

  void close() {
    out_.close();
    if (!out_) throw IoError("failed writing " + path_.string());
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  char buf_[40];
};

std::string header_for(const ScenarioConfig& c, Output kind, const std::string& extra = {}) {
  std::string h = "figure: " + figure_tag(c, kind) + "; scenario: " + c.name;
  if (!extra.empty()) h += "; " + extra;
  return h;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

StrobeSelector StrobeSelector::parse(std::string_view text) {
  if (text == "e3e1") return {Kind::E3MinusE1, 0.0};
  if (text == "e3e0") return {Kind::E3MinusE0, 0.0};
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !(std::isfinite(v) && v > 0.0)) {
    throw ConfigError("strobe must be e3e1, e3e0 or a positive angular frequency, got '" + s + "'");
  }
  return {Kind::Explicit, v};
}

std::string StrobeSelector::to_string() const {
  switch (kind) {
    case Kind::E3MinusE1:
      return "e3e1";
    case Kind::E3MinusE0:
      return "e3e0";
    case Kind::Explicit:
      break;
  }
  return fmt_double(value);
}

double StrobeSelector::resolve(const Eigenbasis& basis) const {
  const double hbar = basis.params().hbar;
  switch (kind) {
    case Kind::E3MinusE1:
      return (basis.energy(3) - basis.energy(1)) / hbar;
    case Kind::E3MinusE0:
      return (basis.energy(3) - basis.energy(0)) / hbar;
    case Kind::Explicit:
      break;
  }
  return value;
}

unsigned parse_outputs(std::string_view text) {
  unsigned out = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    std::string_view item = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item == "trajectory") out |= kTrajectory;
    else if (item == "poincare") out |= kPoincare;
    else if (item == "spectrum") out |= kSpectrum;
    else if (item == "lyapunov") out |= kLyapunov;
    else if (item == "potentials") out |= kPotentials;
    else if (item == "all") out |= kAllOutputs;
    else if (!item.empty()) throw ConfigError("unknown output '" + std::string(item) + "'");
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (out == 0) throw ConfigError("no outputs requested");
  return out;
}

std::string outputs_to_string(unsigned outputs) {
  std::string s;
  const auto add = [&](unsigned bit, const char* name) {
    if (!(outputs & bit)) return;
    if (!s.empty()) s += ',';
    s += name;
  };
  add(kTrajectory, "trajectory");
  add(kPoincare, "poincare");
  add(kSpectrum, "spectrum");
  add(kLyapunov, "lyapunov");
  add(kPotentials, "potentials");
  return s;
}

void ScenarioConfig::validate() const {
  potential_params().validate();
  bool any = false;
  for (const auto& c : coefficients) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw ConfigError("coefficients must be finite");
    any = any || c != Complex{};
  }
  if (!any) throw ConfigError("at least one coefficient c0..c3 must be nonzero");
  if (!std::isfinite(x0)) throw ConfigError("x0 must be finite");
  trajectory_config().validate();
  if (outputs & kLyapunov) lyapunov_config().validate();
  if (!(std::isfinite(d0) && d0 > 0.0)) throw ConfigError("d0 must be positive");
  if (!(std::isfinite(spectrum_dt) && spectrum_dt > 0.0)) throw ConfigError("spectrum_dt must be positive");
  if (spectrum_samples != 0 && (spectrum_samples < 2 || (spectrum_samples & (spectrum_samples - 1)) != 0)) {
    throw ConfigError("spectrum_samples must be 0 (auto) or a power of two");
  }
  if (outputs == 0) throw ConfigError("no outputs requested");
  if (!(potentials_x_max > potentials_x_min)) throw ConfigError("potentials_x_max must exceed potentials_x_min");
  if (potentials_points < 2) throw ConfigError("potentials_points must be at least 2");
  if (strobe.kind == StrobeSelector::Kind::Explicit && !(strobe.value > 0.0)) {
    throw ConfigError("explicit strobe frequency must be positive");
  }
}

PotentialParams ScenarioConfig::potential_params() const { return {xi, beta, 3, hbar, mass}; }

IntegrationConfig ScenarioConfig::trajectory_config() const { return {dt, steps, record_stride, node_guard}; }

IntegrationConfig ScenarioConfig::lyapunov_config() const {
  return {dt, lyapunov_steps, lyapunov_stride, node_guard};
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& p : preset_table()) out.emplace_back(p.name);
  return out;
}

ScenarioConfig preset(std::string_view name) {
  const PresetEntry& p = find_preset(name);
  ScenarioConfig c;
  c.name = std::string(p.name);
  c.figure = std::string(p.figure);
  c.coefficients = p.coefficients;
  c.xi = 4.0;
  c.beta = c.hbar = c.mass = 1.0;
  c.x0 = 0.0;
  c.dt = 1e-3;
  // The periodic orbit returns at 2π/(E₃ − E₀); sections of the other two use (E₃ − E₁).
  c.strobe.kind = p.name == "paper-periodic" ? StrobeSelector::Kind::E3MinusE0 : StrobeSelector::Kind::E3MinusE1;
  return c;
}

std::vector<double> preset_initial_positions(std::string_view name) {
  const PresetEntry& p = find_preset(name);
  if (p.name == "paper-periodic") return {-0.5, 0.0, 0.5};
  return {0.0};
}

std::string preset_description(std::string_view name) { return std::string(find_preset(name).description); }

DerivedConstants derive_constants(const ScenarioConfig& config) {
  const Eigenbasis basis(config.potential_params());
  DerivedConstants d;
  d.alphas = basis.alphas();
  for (int n = 0; n < 4; ++n) {
    d.epsilon[n] = basis.state(n).epsilon;
    d.energy[n] = basis.energy(n);
  }
  const double h = 2.0 * std::numbers::pi * config.hbar;
  d.f10 = (d.energy[1] - d.energy[0]) / h;
  d.f21 = (d.energy[2] - d.energy[1]) / h;
  d.f30 = (d.energy[3] - d.energy[0]) / h;
  d.f31 = (d.energy[3] - d.energy[1]) / h;
  d.strobe_omega = config.strobe.resolve(basis);
  return d;
}

std::string format_manifest(const RunManifest& m) {
  std::ostringstream out;
  out << "# run manifest; feed back with `run <this file>` to reproduce the CSVs\n";
  out << format_config(m.config);
  const auto kv = [&out](const std::string& k, const std::string& v) { out << k << " = " << v << '\n'; };
  const DerivedConstants& d = m.derived;
  kv("derived.alpha_minus", fmt_double(d.alphas.minus));
  kv("derived.alpha_plus", fmt_double(d.alphas.plus));
  for (int n = 0; n < 4; ++n) {
    kv("derived.epsilon" + std::to_string(n), fmt_double(d.epsilon[n]));
    kv("derived.energy" + std::to_string(n), fmt_double(d.energy[n]));
  }
  kv("derived.f10", fmt_double(d.f10));
  kv("derived.f21", fmt_double(d.f21));
  kv("derived.f30", fmt_double(d.f30));
  kv("derived.f31", fmt_double(d.f31));
  kv("derived.strobe_omega", fmt_double(d.strobe_omega));
  for (const auto& a : m.artifacts) kv("artifact." + a.kind, a.path.filename().string());
  kv("stats.trajectory_steps", std::to_string(m.trajectory_steps));
  kv("stats.lyapunov_steps", std::to_string(m.lyapunov_steps));
  kv("stats.wall_seconds", fmt_double(m.wall_seconds));
  kv("stats.terminated_early", m.terminated_early ? "true" : "false");
  if (!m.termination_reason.empty()) kv("stats.termination", m.termination_reason);
  if (!m.error.empty()) kv("stats.error", m.error);
  if (m.section_diameter) kv("classification.section_diameter", fmt_double(*m.section_diameter));
  if (m.section_points) kv("classification.section_points", std::to_string(*m.section_points));
  if (m.final_lambda) kv("classification.final_lambda", fmt_double(*m.final_lambda));
  if (m.dominant_frequency) kv("classification.dominant_frequency", fmt_double(*m.dominant_frequency));
  if (m.regime) kv("classification.regime", to_string(*m.regime));
  kv("note.horizon", "integration horizons (steps, lyapunov_steps) are tool defaults chosen for desk-scale runs");
  for (std::size_t i = 0; i < m.notes.size(); ++i) kv("note." + std::to_string(i), m.notes[i]);
  return out.str();
}

RunManifest run(const ScenarioConfig& config, const std::filesystem::path& out_dir) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();

  RunManifest m;
  m.config = config;
  m.derived = derive_constants(config);
  m.out_dir = out_dir;
  try {
    std::filesystem::create_directories(out_dir);
  } catch (const std::filesystem::filesystem_error& e) {
    throw IoError("cannot create output directory " + out_dir.string() + ": " + e.what());
  }

  const Eigenbasis basis(config.potential_params());
  const WavePacket packet(basis, config.coefficients);
  const auto emit = [&](const char* kind, const char* file) {
    m.artifacts.push_back({kind, out_dir / file});
    return out_dir / file;
  };

  std::optional<PoincareSection> section;
  std::optional<PowerSpectrum> spectrum;
  std::optional<LyapunovSeries> lyap;

  if (config.outputs & (kTrajectory | kPoincare | kSpectrum)) {
    const TrajectoryRecord rec = integrate(packet, config.x0, config.trajectory_config());
    m.trajectory_steps = rec.steps_taken;
    if (rec.terminated_early) {
      m.terminated_early = true;
      m.termination_reason = "trajectory: " + rec.termination_reason;
    }
    if (config.outputs & kTrajectory) {
      CsvFile csv(emit("trajectory", "trajectory.csv"), header_for(config, kTrajectory), "t,x,v");
      for (std::size_t i = 0; i < rec.size(); ++i) csv.row({rec.times[i], rec.positions[i], rec.velocities[i]});
      csv.close();
    }
    if (config.outputs & kPoincare) {
      try {
        section = poincare_section(rec, m.derived.strobe_omega, packet);
        CsvFile csv(emit("poincare", "poincare.csv"),
                    header_for(config, kPoincare, "omega=" + fmt_double(section->strobe_omega)), "m,t,x,v");
        for (const auto& p : section->points) csv.row({static_cast<double>(p.m), p.t, p.x, p.v});
        csv.close();
        m.section_diameter = section->diameter();
        m.section_points = section->points.size();
      } catch (const TooShort& e) {
        m.notes.push_back(std::string("poincare skipped: ") + e.what());
      }
    }
    if (config.outputs & kSpectrum) {
      try {
        const std::size_t n = config.spectrum_samples != 0 ? config.spectrum_samples
                                                            : fitting_sample_count(rec, config.spectrum_dt);
        spectrum = power_spectrum(rec, config.spectrum_dt, n, config.window);
        CsvFile csv(emit("spectrum", "spectrum.csv"),
                    header_for(config, kSpectrum,
                               "sample_dt=" + fmt_double(spectrum->sample_dt) +
                                   " n_samples=" + std::to_string(spectrum->n_samples)),
                    "f,power");
        for (std::size_t k = 0; k < spectrum->power.size(); ++k) csv.row({spectrum->frequencies[k], spectrum->power[k]});
        csv.close();
        m.dominant_frequency = spectrum->frequencies[spectrum->peak_bin()];
      } catch (const TooShort& e) {
        m.notes.push_back(std::string("spectrum skipped: ") + e.what());
      } catch (const ConfigError& e) {
        m.notes.push_back(std::string("spectrum skipped: ") + e.what());
      }
    }
  }

  if (config.outputs & kLyapunov) {
    lyap = lyapunov(packet, config.x0, config.d0, config.lyapunov_config());
    m.lyapunov_steps = lyap->steps_taken;
    m.final_lambda = lyap->final_lambda;
    if (lyap->terminated_early) {
      m.terminated_early = true;
      if (!m.termination_reason.empty()) m.termination_reason += "; ";
      m.termination_reason += "lyapunov: " + lyap->termination_reason;
    }
    CsvFile csv(emit("lyapunov", "lyapunov.csv"), header_for(config, kLyapunov, "d0=" + fmt_double(config.d0)),
                "n,t,lambda");
    for (std::size_t i = 0; i < lyap->steps.size(); ++i) {
      const auto n = lyap->steps[i];
      csv.row({static_cast<double>(n), static_cast<double>(n) * config.dt, lyap->lambda_of_n[i]});
    }
    csv.close();
  }

  if (config.outputs & kPotentials) {
    CsvFile csv(emit("potentials", "potentials.csv"),
                header_for(config, kPotentials, "t=" + fmt_double(config.potentials_t)), "x,V,Q,V_eff");
    const TimeSlice slice = packet.at(config.potentials_t);
    const auto n = config.potentials_points;
    for (std::int64_t i = 0; i < n; ++i) {
      const double x = config.potentials_x_min +
                       (config.potentials_x_max - config.potentials_x_min) * static_cast<double>(i) /
                           static_cast<double>(n - 1);
      const FieldSample s = slice.sample(x, config.node_guard);
      csv.row({x, basis.potential(x), s.quantum_potential, s.effective_potential});
    }
    csv.close();
  }

  if (section && spectrum && lyap) {
    const Classification c = classify(*section, *spectrum, *lyap);
    m.regime = c.regime;
  }

  m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  write_text(emit("manifest", "manifest.txt"), format_manifest(m));
  return m;
}

std::vector<RunManifest> sweep(const ScenarioConfig& base, int coefficient_index, std::span<const double> values,
                               const std::filesystem::path& out_dir) {
  if (coefficient_index != 1 && coefficient_index != 2) throw ConfigError("sweep coefficient must be c1 or c2");
  for (double v : values) {
    if (!std::isfinite(v)) throw ConfigError("sweep values must be finite");
  }
  std::vector<RunManifest> out;
  out.reserve(values.size());
  for (double v : values) {
    ScenarioConfig c = base;
    c.coefficients[coefficient_index] = v;
    char label[64];
    std::snprintf(label, sizeof label, "c%d_%g", coefficient_index, v);
    c.name = base.name + "/" + label;
    const auto dir = out_dir / label;
    try {
      out.push_back(run(c, dir));
    } catch (const std::exception& e) {
      RunManifest failed;
      failed.config = c;
      failed.out_dir = dir;
      failed.error = e.what();
      out.push_back(std::move(failed));
    }
  }
  if (!values.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ostringstream csv;
    csv << "# sweep of c" << coefficient_index << " from " << base.name << '\n';
    csv << "value,regime,section_diameter,final_lambda,terminated_early,error\n";
    const auto opt = [](const std::optional<double>& v) { return v ? fmt_double(*v) : std::string("nan"); };
    for (std::size_t i = 0; i < out.size(); ++i) {
      const auto& r = out[i];
      csv << fmt_double(values[i]) << ',' << (r.regime ? to_string(*r.regime) : "") << ',' << opt(r.section_diameter)
          << ',' << opt(r.final_lambda) << ',' << (r.terminated_early ? "true" : "false") << ",\"" << r.error << "\"\n";
    }
    write_text(out_dir / "sweep.csv", csv.str());
  }
  return out;
}

}  // namespace bohm
