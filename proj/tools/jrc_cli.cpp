// SPDX-License-Identifier: Apache-2.0
//
// jrc experiment runner. Subcommands:
//   sweep       Monte-Carlo MUI sweep over SNR, antenna count or rho
//   beampattern NRP of a method's radar precoder over an angle grid
// Exit codes: 0 success, 1 configuration error, 2 I/O error.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "jrc/config.hpp"
#include "jrc/sweep.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::optional<long> seed;
  std::string output;
  std::string format = "csv";
  int jobs = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "path to flat key = value config")
      ->required();
  cmd->add_option("--seed", args.seed, "override the config seed");
  cmd->add_option("--output", args.output, "output path (default from config)");
  cmd->add_option("--format", args.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--jobs", args.jobs, "worker threads")->check(CLI::PositiveNumber);
}

jrc::EmitFormat emit_format(const CommonArgs& args) {
  return args.format == "json" ? jrc::EmitFormat::json : jrc::EmitFormat::csv;
}

// precedence: --seed flag, then JRC_SEED, then the config value
void resolve_seed(jrc::Scenario& sc, const CommonArgs& args) {
  jrc::apply_seed_env(sc);
  if (args.seed) sc.seed = static_cast<std::uint64_t>(*args.seed);
}

int run_sweep_cmd(const CommonArgs& args) {
  const jrc::Config cfg = jrc::Config::from_file(args.config_path);
  jrc::SweepSpec spec = jrc::sweep_spec_from_config(cfg);
  resolve_seed(spec.scenario, args);
  if (!args.output.empty()) spec.output_path = args.output;
  if (spec.output_path.empty())
    throw jrc::ConfigError("no output path: set 'output' in the config or pass --output");
  const jrc::SweepResult result = jrc::run_sweep(spec, args.jobs);
  jrc::emit_results(result, spec.output_path, emit_format(args));
  std::cout << "wrote " << result.rows.size() << " rows to " << spec.output_path
            << "\n";
  return 0;
}

int run_beampattern_cmd(const CommonArgs& args) {
  const jrc::Config cfg = jrc::Config::from_file(args.config_path);
  jrc::Scenario sc = jrc::scenario_from_config(cfg);
  resolve_seed(sc, args);
  std::vector<double> targets = cfg.get_real_list("target_angles");
  if (targets.empty())
    throw jrc::ConfigError("config key 'target_angles': required for beampattern");
  const jrc::Method method = jrc::parse_method(cfg.get_string("method", "proposed"));
  const double grid_step = cfg.get_real("grid_step_deg", 0.5);
  std::string output = !args.output.empty() ? args.output : cfg.get_string("output", "");
  if (output.empty())
    throw jrc::ConfigError("no output path: set 'output' in the config or pass --output");
  const jrc::Beampattern bp = jrc::run_beampattern(sc, targets, method, grid_step);
  jrc::emit_results(bp, output, emit_format(args));
  std::cout << "wrote " << bp.angles_deg.size() << " grid points to " << output << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"covariance-based hybrid beamforming experiments for JRC"};
  app.require_subcommand(1);

  CommonArgs sweep_args;
  CLI::App* sweep = app.add_subcommand("sweep", "run a Monte-Carlo MUI sweep");
  add_common(sweep, sweep_args);

  CommonArgs bp_args;
  CLI::App* beam = app.add_subcommand("beampattern", "emit an NRP beampattern");
  add_common(beam, bp_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sweep->parsed()) return run_sweep_cmd(sweep_args);
    if (beam->parsed()) return run_beampattern_cmd(bp_args);
  } catch (const jrc::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  } catch (const jrc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
