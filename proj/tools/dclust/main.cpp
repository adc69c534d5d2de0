#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace dclust::cli;

  CLI::App app{"dclust: greedy resource-flow clustering simulator"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommandOptions run_opts, sweep_opts, oracle_opts;

  auto add_common = [](CLI::App* cmd, CommandOptions& o) {
    cmd->add_option("--config", o.config, "Run configuration file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "Override run.seed");
    cmd->add_option("--out", o.out, "Override output.dir");
  };

  auto* run = app.add_subcommand("run", "Run one configuration to absorption or run.max_steps");
  add_common(run, run_opts);
  run->add_option("--parallel", run_opts.parallel, "Threads within the run")->check(CLI::PositiveNumber);

  auto* sweep = app.add_subcommand("sweep", "Run every grid point x seed of a sweep configuration");
  add_common(sweep, sweep_opts);
  sweep->add_option("--parallel", sweep_opts.parallel, "Concurrent runs")->check(CLI::PositiveNumber);

  auto* oracle = app.add_subcommand("oracle-check", "Compare engine frequencies with exact enumeration");
  add_common(oracle, oracle_opts);
  oracle->add_option("--tolerance", oracle_opts.tolerance, "Override oracle.tolerance");

  std::filesystem::path snap_run, snap_out = ".";
  std::uint64_t snap_step = 0;
  auto* snapshot = app.add_subcommand("snapshot", "Export a captured field as CSV (and PGM for 2-D tori)");
  snapshot->add_option("--run", snap_run, "Output directory of a previous run")->required();
  snapshot->add_option("--step", snap_step, "Step to export")->required();
  snapshot->add_option("--out", snap_out, "Destination directory");

  CLI11_PARSE(app, argc, argv);

  if (*run) return cmd_run(run_opts, std::cout, std::cerr);
  if (*sweep) return cmd_sweep(sweep_opts, std::cout, std::cerr);
  if (*oracle) return cmd_oracle_check(oracle_opts, std::cout, std::cerr);
  return cmd_snapshot(snap_run, snap_step, snap_out, std::cout, std::cerr);
}
