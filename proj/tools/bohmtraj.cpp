// bohmtraj: pilot-wave trajectories in the n = 3 bistable potential.
//
//   bohmtraj run <preset|config-file> [--out DIR] [--dt X] [--steps N] [--x0 X]
//                [--strobe e3e1|e3e0|<omega>] [--outputs LIST] [--lyapunov-steps N] [--full-horizon]
//   bohmtraj sweep <preset|config-file> --coef c1|c2 --values v1,v2,... [--out DIR] ...
//   bohmtraj list-presets
//
// Exit codes: 0 success, 2 config error, 3 trajectory stopped at a node, 4 I/O error.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "bohm/errors.hpp"
#include "bohm/scenarios.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNode = 3;
constexpr int kExitIo = 4;

struct Overrides {
  std::optional<double> dt;
  std::optional<std::int64_t> steps;
  std::optional<double> x0;
  std::optional<std::string> strobe;
  std::optional<std::string> outputs;
  std::optional<std::int64_t> lyapunov_steps;
  bool full_horizon = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--dt", dt, "integration step");
    cmd->add_option("--steps", steps, "trajectory steps");
    cmd->add_option("--x0", x0, "initial position");
    cmd->add_option("--strobe", strobe, "strobe frequency: e3e1, e3e0 or an angular frequency");
    cmd->add_option("--outputs", outputs, "comma list of trajectory,poincare,spectrum,lyapunov,potentials");
    cmd->add_option("--lyapunov-steps", lyapunov_steps, "steps of the paired Lyapunov run");
    cmd->add_flag("--full-horizon", full_horizon, "Lyapunov run over 5e7 steps");
  }

  void apply(bohm::ScenarioConfig& c) const {
    if (dt) c.dt = *dt;
    if (steps) c.steps = *steps;
    if (x0) c.x0 = *x0;
    if (strobe) c.strobe = bohm::StrobeSelector::parse(*strobe);
    if (outputs) c.outputs = bohm::parse_outputs(*outputs);
    if (full_horizon) c.lyapunov_steps = 50'000'000;
    if (lyapunov_steps) c.lyapunov_steps = *lyapunov_steps;
    c.validate();
  }
};

void print_summary(const bohm::RunManifest& m) {
  std::printf("%s -> %s\n", m.config.name.c_str(), m.out_dir.string().c_str());
  if (m.section_diameter) std::printf("  section diameter  %.6g (%zu points)\n", *m.section_diameter, *m.section_points);
  if (m.dominant_frequency) std::printf("  dominant f        %.6g\n", *m.dominant_frequency);
  if (m.final_lambda) std::printf("  final lambda      %.6g\n", *m.final_lambda);
  if (m.regime) std::printf("  regime            %s\n", bohm::to_string(*m.regime).c_str());
  if (m.terminated_early) std::printf("  stopped early: %s\n", m.termination_reason.c_str());
  for (const auto& n : m.notes) std::printf("  note: %s\n", n.c_str());
  if (!m.error.empty()) std::printf("  error: %s\n", m.error.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bohmian trajectories in a bistable potential"};
  app.require_subcommand(1);

  std::string scenario;
  std::string out_dir = "out";
  Overrides run_over;
  auto* run_cmd = app.add_subcommand("run", "run a preset or config file");
  run_cmd->add_option("scenario", scenario, "preset name or config file")->required();
  run_cmd->add_option("--out", out_dir, "output directory");
  run_over.attach(run_cmd);

  std::string sweep_scenario;
  std::string sweep_out = "sweep";
  std::string coef;
  std::vector<double> values;
  Overrides sweep_over;
  auto* sweep_cmd = app.add_subcommand("sweep", "vary c1 or c2 over a list of values");
  sweep_cmd->add_option("scenario", sweep_scenario, "preset name or config file")->required();
  sweep_cmd->add_option("--coef", coef, "c1 or c2")->required()->check(CLI::IsMember({"c1", "c2"}));
  sweep_cmd->add_option("--values", values, "comma-separated values")->required()->delimiter(',');
  sweep_cmd->add_option("--out", sweep_out, "output directory");
  sweep_over.attach(sweep_cmd);

  auto* list_cmd = app.add_subcommand("list-presets", "show built-in scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*list_cmd) {
      for (const auto& name : bohm::preset_names()) {
        std::printf("%-22s %s\n", name.c_str(), bohm::preset_description(name).c_str());
      }
      return 0;
    }
    if (*run_cmd) {
      bohm::ScenarioConfig config = bohm::resolve_scenario(scenario);
      run_over.apply(config);
      const bohm::RunManifest m = bohm::run(config, out_dir);
      print_summary(m);
      return m.terminated_early ? kExitNode : 0;
    }
    bohm::ScenarioConfig base = bohm::resolve_scenario(sweep_scenario);
    sweep_over.apply(base);
    const auto results = bohm::sweep(base, coef == "c1" ? 1 : 2, values, sweep_out);
    bool node = false;
    for (const auto& m : results) {
      print_summary(m);
      node = node || m.terminated_early;
    }
    return node ? kExitNode : 0;
  } catch (const bohm::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const bohm::IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kExitIo;
  }
}
