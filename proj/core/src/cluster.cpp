#include "dclust/cluster.hpp"

#include <numeric>
#include <stdexcept>

namespace dclust {

ClusterState::ClusterState(std::size_t origin_count)
    : parent_(origin_count),
      size_(origin_count, 1),
      location_(origin_count),
      occupant_(origin_count),
      next_occupant_(origin_count),
      moved_(origin_count, 0),
      last_move_(origin_count, -1) {
  if (origin_count >= kNoVertex) throw std::invalid_argument("cluster: too many origins");
  std::iota(parent_.begin(), parent_.end(), VertexId{0});
  std::iota(location_.begin(), location_.end(), VertexId{0});
  std::iota(occupant_.begin(), occupant_.end(), VertexId{0});
}

VertexId ClusterState::find(VertexId v) const noexcept {
  // path halving
  while (parent_[v] != v) {
    parent_[v] = parent_[parent_[v]];
    v = parent_[v];
  }
  return v;
}

VertexId ClusterState::root(VertexId origin) const noexcept { return find(origin); }

void ClusterState::advance(std::span<const VertexId> targets, const Graph& g, std::uint64_t step) {
  const std::size_t n = origin_count();
  if (targets.size() != n || g.vertex_count() != n)
    throw std::invalid_argument("cluster: target map does not match the origin set");

  bool any_moved = false;
  for (VertexId x = 0; x < n; ++x) {
    const VertexId r = occupant_[x];
    if (r == kNoVertex) continue;
    const bool m = targets[x] != x;
    moved_[r] = m;
    any_moved = any_moved || m;
  }
  if (!any_moved) return;

  for (VertexId v = 0; v < n; ++v)
    if (moved_[find(v)]) last_move_[v] = static_cast<std::int64_t>(step);

  // Gather: the clusters arriving at y are those at sources x in G_y with
  // targets[x] == y.
  for (VertexId y = 0; y < n; ++y) {
    VertexId acc = kNoVertex;
    for (VertexId x : g.neighbors(y)) {
      if (targets[x] != y) continue;
      VertexId r = occupant_[x];
      if (r == kNoVertex) continue;
      if (acc == kNoVertex) {
        acc = r;
        continue;
      }
      if (size_[acc] < size_[r]) std::swap(acc, r);
      parent_[r] = acc;
      size_[acc] += size_[r];
    }
    next_occupant_[y] = acc;
    if (acc != kNoVertex) location_[acc] = y;
  }
  occupant_.swap(next_occupant_);
}

bool ClusterState::consistent() const {
  const std::size_t n = origin_count();
  std::size_t covered = 0;
  for (VertexId x = 0; x < n; ++x) {
    const VertexId r = occupant_[x];
    if (r == kNoVertex) continue;
    if (find(r) != r || location_[r] != x) return false;
    covered += size_[r];
  }
  if (covered != n) return false;
  for (VertexId v = 0; v < n; ++v)
    if (occupant_[location_[find(v)]] != find(v)) return false;
  return true;
}

}  // namespace dclust
