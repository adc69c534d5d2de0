#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dclust/cluster.hpp"
#include "dclust/engine.hpp"
#include "dclust/graph.hpp"
#include "dclust/init.hpp"

namespace dclust {

/// One (delta, k) pair of the joint counter P(0 < gap < delta, |S_n(x)| <= k).
struct JointThreshold {
  double delta = 0.0;
  std::size_t k = 0;
};

template <Resource T>
struct TimeSeriesRow {
  std::uint64_t step = 0;
  double activity = 0.0;
  std::size_t ties = 0;
  std::array<std::size_t, kEventTagCount> counts{};
  T max_gap{};
  double mean_gap = 0.0;
  std::size_t active_count = 0;
  std::size_t max_cluster = 0;
  double moment_alpha2 = 0.0;
  std::vector<double> joint;
  T total_mass{};
};

template <Resource T>
struct RunResult {
  std::vector<TimeSeriesRow<T>> rows;
  std::vector<JointThreshold> joint_thresholds;
  bool absorbed = false;
  /// First step n at which C_n was absorbed.
  std::optional<std::uint64_t> absorption_step;
  /// Transitions applied.
  std::uint64_t steps_executed = 0;
  Field<T> initial;
  Field<T> final_field;
  std::vector<std::optional<std::uint64_t>> last_move;
  std::vector<std::uint32_t> d_events;
  std::vector<std::uint32_t> e_events;
  std::vector<std::uint32_t> tie_events;
  /// Event tags of the last few observed steps, oldest first.
  std::vector<std::vector<EventTag>> trailing_events;
};

/// Fraction of vertices with a_n(x) != x.
template <Resource T>
double activity(const StepReport<T>& report);

/// |E_n(x)| for every x, tallied from the targets.
std::vector<std::size_t> in_degrees(const TargetMap& targets);

/// Sum over x of |E_n(x)|; equals the vertex count for any target map.
std::size_t in_degree_total(const TargetMap& targets);

/// C'_n(x) - C_n(x) = max over G_x of C_n minus C_n(x); zero for inactive x.
template <Resource T>
std::vector<T> gaps(const Field<T>& field, const Graph& g);

template <Resource T>
struct GapStats {
  T max_gap{};
  double mean_gap = 0.0;
  std::size_t active_count = 0;
};

/// Gap statistics over active vertices. An all-zero field reports zeros.
template <Resource T>
GapStats<T> gap_stats(const Field<T>& field, const Graph& g);

/// size -> number of occupied locations holding a cluster of that size.
std::map<std::size_t, std::size_t> cluster_histogram(const ClusterState& clusters);

std::size_t max_cluster(const ClusterState& clusters);

/// Sum over locations of |S_n(x)|^alpha divided by the vertex count.
/// Exactly 1 for alpha = 1. Throws std::invalid_argument for alpha < 1.
double cluster_moment(const ClusterState& clusters, double alpha);

/// Fraction of vertices x with 0 < gap(x) < delta and |S_n(x)| <= k.
template <Resource T>
double joint_gap_fraction(std::span<const T> gaps, const ClusterState& clusters, double delta,
                          std::size_t k);

template <Resource T>
TimeSeriesRow<T> make_row(const StepReport<T>& report, const Field<T>& field, const Graph& g,
                          const ClusterState& clusters, std::span<const JointThreshold> joint);

struct MovingMass {
  /// Fraction of origins whose resource still moves after step n.
  double origin_fraction = 0.0;
  /// The same weighted by initial resource (0 when the total is 0 or infinite).
  double mass_fraction = 0.0;
  /// Set when the run was not absorbed: later motion is unobserved, so the
  /// values are lower bounds.
  bool lower_bound = false;
};

template <Resource T>
MovingMass moving_mass_fraction(const RunResult<T>& run, std::uint64_t n);

enum class VertexType { A, B, C, undetermined };

inline const char* to_string(VertexType t) {
  switch (t) {
    case VertexType::A: return "A";
    case VertexType::B: return "B";
    case VertexType::C: return "C";
    default: return "undetermined";
  }
}

/// Absorbed runs: A iff the final resource is 0, else B. Otherwise a vertex
/// is typed A/B/C only when that tag fills the entire trailing window.
template <Resource T>
std::vector<VertexType> vertex_type(const RunResult<T>& run);

/// Snapshot handed to run observers between prepare and commit of step n.
template <Resource T>
struct StepView {
  const Graph& graph;
  const Field<T>& field;
  std::span<const T> next;
  const StepReport<T>& report;
  const ClusterState& clusters;
  bool absorbed;
};

/// Checks the finite-graph identities and taxonomy laws on every observed
/// step and counts violations by name.
template <Resource T>
class InvariantAudit {
 public:
  explicit InvariantAudit(double real_drift_tolerance = 1e-9) : tolerance_(real_drift_tolerance) {}

  void observe(const StepView<T>& view);

  bool clean() const noexcept { return violations_.empty(); }
  const std::map<std::string, std::size_t>& violations() const noexcept { return violations_; }
  double max_relative_drift() const noexcept { return max_drift_; }
  std::size_t steps_checked() const noexcept { return steps_; }

 private:
  void flag(const char* law, std::size_t n = 1) {
    if (n) violations_[law] += n;
  }

  double tolerance_;
  double max_drift_ = 0.0;
  std::size_t steps_ = 0;
  std::vector<std::uint32_t> e_seen_;
  std::map<std::string, std::size_t> violations_;
};

}  // namespace dclust
