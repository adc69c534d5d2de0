#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dclust/graph.hpp"

namespace dclust {

/// Genealogy of the initial resources: S_n(x), the origins whose resource
/// sits at x at time n, and L_n(v), the location of origin v's resource.
///
/// Merge-only union-find over origin ids. Each root carries its member count
/// and current location; each occupied location names its root. Every origin
/// belongs to exactly one cluster, and distinct clusters occupy distinct
/// locations. Origins that start with zero resource stay singletons at
/// their own vertex forever.
class ClusterState {
 public:
  explicit ClusterState(std::size_t origin_count);

  std::size_t origin_count() const noexcept { return parent_.size(); }

  /// Root of the cluster holding `origin`.
  VertexId root(VertexId origin) const noexcept;

  /// L_n(v).
  VertexId location(VertexId origin) const noexcept { return location_[root(origin)]; }

  /// Root of the cluster at `x`, or kNoVertex when no cluster sits there.
  VertexId occupant(VertexId x) const noexcept { return occupant_[x]; }

  /// |S_n(x)|; 0 for an unoccupied location.
  std::size_t size_at(VertexId x) const noexcept {
    const VertexId r = occupant_[x];
    return r == kNoVertex ? 0 : size_[r];
  }

  /// Last step m with L_{m+1}(v) != L_m(v); empty if the resource never moved.
  std::optional<std::uint64_t> last_move(VertexId origin) const noexcept {
    const auto m = last_move_[origin];
    return m < 0 ? std::nullopt : std::optional<std::uint64_t>(static_cast<std::uint64_t>(m));
  }

  /// Moves every cluster at x to targets[x] and merges clusters that land on
  /// the same vertex. `step` is the index n of the transition n -> n+1.
  void advance(std::span<const VertexId> targets, const Graph& g, std::uint64_t step);

  /// Sum of |S_n(x)| over locations and location/root consistency. Returns
  /// false if any structural invariant is broken.
  bool consistent() const;

 private:
  VertexId find(VertexId v) const noexcept;

  mutable std::vector<VertexId> parent_;
  std::vector<std::uint32_t> size_;
  std::vector<VertexId> location_;
  std::vector<VertexId> occupant_;
  std::vector<VertexId> next_occupant_;
  std::vector<std::uint8_t> moved_;
  std::vector<std::int64_t> last_move_;
};

}  // namespace dclust
