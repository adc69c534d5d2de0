#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "dclust/cluster.hpp"
#include "dclust/graph.hpp"
#include "dclust/init.hpp"
#include "dclust/value.hpp"

namespace dclust {

/// Per-vertex, per-step event. With R = {z in G_x : a_n(z) = x}:
///   A  C_n(x) = 0
///   B  R = {x}
///   C  R = {z} for some z != x
///   D  |R| > 1
///   E  R is empty
enum class EventTag : std::uint8_t { A = 0, B, C, D, E };

inline constexpr std::size_t kEventTagCount = 5;

constexpr char tag_char(EventTag t) noexcept { return static_cast<char>('A' + static_cast<int>(t)); }

/// a_n(x) for every vertex and the size of the argmax set it was drawn from
/// (1 when there was no tie or when C_n(x) = 0).
struct TargetMap {
  std::vector<VertexId> target;
  std::vector<std::uint16_t> tie_size;

  std::size_t size() const noexcept { return target.size(); }
};

template <Resource T>
struct StepReport {
  std::uint64_t step = 0;
  TargetMap targets;
  std::vector<EventTag> events;
  std::array<std::size_t, kEventTagCount> counts{};
  /// Vertices with tie_size > 1.
  std::size_t ties = 0;
  /// Vertices with a_n(x) != x.
  std::size_t movers = 0;
  T mass_before{};
  T mass_after{};

  std::size_t count(EventTag t) const noexcept { return counts[static_cast<std::size_t>(t)]; }
};

/// Argmax targets for configuration `field` at step field.step. Ties are
/// broken uniformly with the stream keyed by (seed, step, x), so the result
/// does not depend on `threads`.
template <Resource T>
TargetMap targets(const Field<T>& field, const Graph& g, std::uint64_t seed, int threads = 1);

template <Resource T>
std::vector<EventTag> classify(const Field<T>& field, const TargetMap& targets, const Graph& g);

/// True iff no two adjacent vertices are both positive, i.e. every positive
/// vertex strictly dominates its neighborhood. Such a state is a fixed point
/// of the dynamics for every tie-break realization.
template <Resource T>
bool is_absorbed(const Field<T>& field, const Graph& g);

/// Synchronous double-buffered dynamics with cluster genealogy.
///
/// prepare() evaluates step n (targets, inflow, events, next configuration)
/// from the step-n state only; commit() installs the result and relocates
/// clusters. The two are split so observers can look at both C_n and
/// C_{n+1} before the old buffer is recycled.
template <Resource T>
class Simulation {
 public:
  Simulation(const Graph& g, Field<T> initial, std::uint64_t seed, int threads = 1);

  const Graph& graph() const noexcept { return *graph_; }
  const Field<T>& field() const noexcept { return field_; }
  const ClusterState& clusters() const noexcept { return clusters_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t step_index() const noexcept { return field_.step; }

  /// Idempotent until the next commit(). Throws OverflowError in exact mode.
  const StepReport<T>& prepare();

  /// C_{n+1}; valid after prepare().
  std::span<const T> next_values() const noexcept { return next_; }
  const StepReport<T>& report() const noexcept { return report_; }

  void commit();

  const StepReport<T>& advance() {
    prepare();
    commit();
    return report_;
  }

 private:
  const Graph* graph_;
  Field<T> field_;
  ClusterState clusters_;
  std::uint64_t seed_;
  int threads_;
  StepReport<T> report_;
  std::vector<T> next_;
  bool prepared_ = false;
};

/// One step applied in place: field becomes C_{n+1} and clusters are moved
/// and merged. Returns the report for step n.
template <Resource T>
StepReport<T> step(Field<T>& field, ClusterState& clusters, const Graph& g, std::uint64_t seed,
                   int threads = 1);

}  // namespace dclust
