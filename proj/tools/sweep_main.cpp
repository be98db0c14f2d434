// Command-line front end: solve runs, convergence studies and assumption
// diagnostics for sweeping-process scenarios described by a JSON config.

#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sweep/errors.hpp"
#include "sweep/runner.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitSolverError = 3;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Path to the JSON run config")
      ->required();
  cmd->add_option("--out", args.out_dir, "Output directory (overrides config)");
  cmd->add_option("--seed", args.seed, "Seed (overrides config)");
  cmd->add_option("--threads", args.threads, "Worker threads for studies")
      ->check(CLI::PositiveNumber);
}

sweep::RunConfig load(const CommonArgs& args) {
  sweep::RunConfig cfg = sweep::load_config(args.config_path);
  if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
  if (args.seed) cfg.seed = *args.seed;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prediction-correction solver for perturbed sweeping processes"};
  app.require_subcommand(1);

  CommonArgs solve_args, conv_args, check_args;
  CLI::App* cmd_solve =
      app.add_subcommand("solve", "Run the scheme and write the trajectory CSV");
  add_common(cmd_solve, solve_args);
  CLI::App* cmd_convergence = app.add_subcommand(
      "convergence", "Error study against the h_min reference run");
  add_common(cmd_convergence, conv_args);
  CLI::App* cmd_check =
      app.add_subcommand("check", "Sampled verification of the assumption constants");
  add_common(cmd_check, check_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_solve->parsed()) {
      const sweep::RunConfig cfg = load(solve_args);
      sweep::run_solve(cfg, cfg.output_dir);
    } else if (cmd_convergence->parsed()) {
      const sweep::RunConfig cfg = load(conv_args);
      sweep::run_convergence(cfg, cfg.output_dir, conv_args.threads);
    } else if (cmd_check->parsed()) {
      const sweep::RunConfig cfg = load(check_args);
      sweep::run_check(cfg, cfg.output_dir);
    }
  } catch (const sweep::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfigError;
  } catch (const sweep::StepError& e) {
    std::fprintf(stderr, "solver error at step %d: %s\n", e.step_index, e.what());
    return kExitSolverError;
  } catch (const sweep::SolverError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return kExitSolverError;
  }
  return 0;
}
