#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include <dclust/oracle.hpp>

#include "run_config.hpp"

namespace dclust::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitConfig = 2,
  kExitRuntime = 3,
};

struct CommandOptions {
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::optional<int> parallel;
  std::optional<double> tolerance;
};

struct RunSummary {
  bool absorbed = false;
  std::optional<std::uint64_t> absorption_step;
  std::uint64_t steps_executed = 0;
  std::string active_count;
  std::string max_cluster;
  std::string moment_alpha2;
  std::string total_mass;
  double wall_seconds = 0.0;
  bool audit_clean = true;
  nlohmann::json manifest;
};

/// Runs one configuration and writes manifest.json, timeseries.csv,
/// moving_mass.csv, final_field.csv and snapshots/ under `out_dir`.
/// Throws OverflowError on exact-mode overflow.
RunSummary execute_run(const RunConfig& config, const std::filesystem::path& out_dir);

/// Applies --seed/--out overrides to a loaded config file.
ConfigFile load_with_overrides(const CommandOptions& opts);

nlohmann::json oracle_report_json(const oracle::ComparisonReport& report, double tolerance);

int cmd_run(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_oracle_check(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_snapshot(const std::filesystem::path& run_dir, std::uint64_t step,
                 const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err);

}  // namespace dclust::cli
