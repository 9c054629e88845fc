#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "bohm/errors.hpp"
#include "bohm/scenarios.hpp"

namespace bohm {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Parser {
  std::string source;
  int line = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(source + ":" + std::to_string(line) + ": " + what);
  }

  double real(std::string_view text) const {
    text = trim(text);
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) fail("expected a number, got '" + std::string(text) + "'");
    return v;
  }

  std::int64_t integer(std::string_view text) const {
    text = trim(text);
    std::int64_t v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec == std::errc{} && ptr == end) return v;
    // Accept exact integers in floating notation such as 1e7.
    const double d = real(text);
    if (d != std::floor(d) || std::abs(d) > 9.0e15) fail("expected an integer, got '" + std::string(text) + "'");
    return static_cast<std::int64_t>(d);
  }

  Complex complex(std::string_view text) const {
    const auto comma = text.find(',');
    if (comma == std::string_view::npos) return {real(text), 0.0};
    return {real(text.substr(0, comma)), real(text.substr(comma + 1))};
  }
};

bool ignored_namespace(std::string_view key) {
  for (std::string_view prefix : {"derived.", "artifact.", "stats.", "classification.", "note."}) {
    if (key.starts_with(prefix)) return true;
  }
  return false;
}

}  // namespace

ScenarioConfig parse_config(std::istream& in, const std::string& source) {
  Parser p{source};
  std::vector<std::pair<std::string, std::pair<std::string, int>>> entries;
  std::string base_preset;
  std::string raw;
  while (std::getline(in, raw)) {
    ++p.line;
    std::string_view s = raw;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) p.fail("expected 'key = value'");
    const std::string key(trim(s.substr(0, eq)));
    const std::string value(trim(s.substr(eq + 1)));
    if (key.empty()) p.fail("empty key");
    if (ignored_namespace(key)) continue;
    if (key == "preset") {
      base_preset = value;
      continue;
    }
    entries.push_back({key, {value, p.line}});
  }

  ScenarioConfig c = base_preset.empty() ? ScenarioConfig{} : preset(base_preset);
  for (const auto& [key, vl] : entries) {
    const auto& [value, line] = vl;
    p.line = line;
    if (key == "name") c.name = value;
    else if (key == "figure") c.figure = value;
    else if (key == "xi") c.xi = p.real(value);
    else if (key == "beta") c.beta = p.real(value);
    else if (key == "hbar") c.hbar = p.real(value);
    else if (key == "mass") c.mass = p.real(value);
    else if (key.size() == 2 && key[0] == 'c' && key[1] >= '0' && key[1] <= '3') c.coefficients[key[1] - '0'] = p.complex(value);
    else if (key == "x0") c.x0 = p.real(value);
    else if (key == "dt") c.dt = p.real(value);
    else if (key == "steps") c.steps = p.integer(value);
    else if (key == "record_stride") c.record_stride = p.integer(value);
    else if (key == "node_guard") c.node_guard = p.real(value);
    else if (key == "strobe") {
      try {
        c.strobe = StrobeSelector::parse(value);
      } catch (const ConfigError& e) {
        p.fail(e.what());
      }
    } else if (key == "outputs") {
      try {
        c.outputs = parse_outputs(value);
      } catch (const ConfigError& e) {
        p.fail(e.what());
      }
    } else if (key == "lyapunov_steps") c.lyapunov_steps = p.integer(value);
    else if (key == "lyapunov_stride") c.lyapunov_stride = p.integer(value);
    else if (key == "d0") c.d0 = p.real(value);
    else if (key == "spectrum_dt") c.spectrum_dt = p.real(value);
    else if (key == "spectrum_samples") c.spectrum_samples = static_cast<std::size_t>(p.integer(value));
    else if (key == "window") {
      if (value == "none") c.window = Window::None;
      else if (value == "hann") c.window = Window::Hann;
      else p.fail("window must be 'none' or 'hann'");
    } else if (key == "potentials_t") c.potentials_t = p.real(value);
    else if (key == "potentials_x_min") c.potentials_x_min = p.real(value);
    else if (key == "potentials_x_max") c.potentials_x_max = p.real(value);
    else if (key == "potentials_points") c.potentials_points = p.integer(value);
    else p.fail("unknown key '" + key + "'");
  }
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  return parse_config(in, path.string());
}

std::string format_config(const ScenarioConfig& c) {
  std::ostringstream out;
  const auto kv = [&out](std::string_view k, const std::string& v) { out << k << " = " << v << '\n'; };
  kv("name", c.name);
  if (!c.figure.empty()) kv("figure", c.figure);
  kv("xi", fmt_double(c.xi));
  kv("beta", fmt_double(c.beta));
  kv("hbar", fmt_double(c.hbar));
  kv("mass", fmt_double(c.mass));
  for (int n = 0; n < 4; ++n) {
    kv("c" + std::to_string(n), fmt_double(c.coefficients[n].real()) + "," + fmt_double(c.coefficients[n].imag()));
  }
  kv("x0", fmt_double(c.x0));
  kv("dt", fmt_double(c.dt));
  kv("steps", std::to_string(c.steps));
  kv("record_stride", std::to_string(c.record_stride));
  kv("node_guard", fmt_double(c.node_guard));
  kv("strobe", c.strobe.to_string());
  kv("outputs", outputs_to_string(c.outputs));
  kv("lyapunov_steps", std::to_string(c.lyapunov_steps));
  kv("lyapunov_stride", std::to_string(c.lyapunov_stride));
  kv("d0", fmt_double(c.d0));
  kv("spectrum_dt", fmt_double(c.spectrum_dt));
  kv("spectrum_samples", std::to_string(c.spectrum_samples));
  kv("window", c.window == Window::Hann ? "hann" : "none");
  kv("potentials_t", fmt_double(c.potentials_t));
  kv("potentials_x_min", fmt_double(c.potentials_x_min));
  kv("potentials_x_max", fmt_double(c.potentials_x_max));
  kv("potentials_points", std::to_string(c.potentials_points));
  return out.str();
}

ScenarioConfig resolve_scenario(const std::string& preset_or_path) {
  for (const auto& name : preset_names()) {
    if (name == preset_or_path) return preset(name);
  }
  if (std::filesystem::exists(preset_or_path)) return load_config(preset_or_path);
  throw UnknownPreset(preset_or_path);
}

}  // namespace bohm
