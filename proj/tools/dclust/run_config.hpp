#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <dclust/graph.hpp>
#include <dclust/init.hpp>
#include <dclust/run.hpp>
#include <dclust/stats.hpp>

#include "config.hpp"

namespace dclust::cli {

struct GraphParams {
  GraphKind kind = GraphKind::torus;
  std::vector<std::size_t> lengths;
  Boundary boundary = Boundary::periodic;
  std::size_t layers = 1;
  std::vector<EdgeTemplate> templates;

  std::size_t dimension() const noexcept { return lengths.size(); }
};

/// Fully resolved, validated run configuration.
struct RunConfig {
  GraphParams graph;
  DistributionSpec init;
  std::uint64_t seed = 0;
  std::uint64_t max_steps = 100000;
  int threads = 1;
  std::uint64_t cadence = 1;
  bool stop_on_absorption = true;
  bool audit = true;
  std::size_t type_window = 16;
  std::vector<double> deltas{0.1, 0.01, 0.001};
  std::vector<std::uint64_t> ks{1, 4, 16};
  std::vector<std::uint64_t> snapshot_steps;
  std::uint64_t snapshot_every = 0;
  std::string out_dir = "out";
  std::uint64_t oracle_horizon = 1;
  std::uint64_t oracle_trials = 100000;
  double oracle_tolerance = 0.01;

  /// Every (delta, k) pair, deltas outermost.
  std::vector<JointThreshold> joint() const;
};

/// Validates every key against the module preconditions before any work
/// starts; ConfigError names the offending key. Keys under `sweep.` are
/// ignored here.
RunConfig resolve(const ConfigFile& file);

Graph build_graph(const GraphParams& params);

/// Resolved configuration as `key -> value` text; feeding it back through
/// resolve() reproduces the same run.
std::map<std::string, std::string> canonical(const RunConfig& config);

std::string joint_column_name(const JointThreshold& j);

/// Cartesian product of every `sweep.<key> = v1 | v2 | ...` axis times
/// `sweep.seeds` consecutive seeds starting at run.seed. Grid axes are
/// expanded in key order; the seed varies fastest.
struct SweepPoint {
  ConfigFile config;
  std::map<std::string, std::string> grid;
  std::uint64_t seed = 0;
};
std::vector<SweepPoint> expand_sweep(const ConfigFile& file);

template <Resource T>
Field<T> initial_field(const RunConfig& config, const Graph& g) {
  return sample_field<T>(g, config.init, config.seed);
}

template <Resource T>
RunOptions<T> run_options(const RunConfig& config) {
  RunOptions<T> opts;
  opts.max_steps = config.max_steps;
  opts.seed = config.seed;
  opts.threads = config.threads;
  opts.cadence = config.cadence;
  opts.stop_on_absorption = config.stop_on_absorption;
  opts.joint = config.joint();
  opts.type_window = config.type_window;
  return opts;
}

/// Upper bound on worker threads from DCLUST_MAX_PARALLEL, or 0 if unset.
int parallel_cap();
int capped(int requested);

}  // namespace dclust::cli
