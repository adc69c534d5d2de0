#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace dclust {

using VertexId = std::uint32_t;
inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

enum class GraphKind { torus, layered };

// `free` drops every edge that would wrap around the box. It breaks
// translation invariance and is meant only for probing escape of mass.
enum class Boundary { periodic, free };

/// Edges (from_layer, c) -- (to_layer, c + offset) for every lattice site c.
/// Layers are 0-based.
struct EdgeTemplate {
  std::size_t from_layer = 0;
  std::size_t to_layer = 0;
  std::vector<std::int64_t> offset;
};

struct Site {
  std::size_t layer = 0;
  std::vector<std::size_t> coords;
};

/// Finite graph with stored closed neighborhoods G_x (x itself included,
/// sorted ascending, duplicate-free).
///
/// Vertex ids are row-major over (layer, x_0, ..., x_{d-1}) with the last
/// coordinate varying fastest:
///   id = layer * prod(lengths) + ((x_0 * L_1 + x_1) * L_2 + ...) .
/// Immutable after construction.
class Graph {
 public:
  std::size_t vertex_count() const noexcept { return offsets_.size() - 1; }
  GraphKind kind() const noexcept { return kind_; }
  Boundary boundary() const noexcept { return boundary_; }
  std::size_t dimension() const noexcept { return lengths_.size(); }
  std::size_t layers() const noexcept { return layers_; }
  const std::vector<std::size_t>& lengths() const noexcept { return lengths_; }
  const std::vector<EdgeTemplate>& templates() const noexcept { return templates_; }
  /// Number of lattice sites per layer.
  std::size_t cell_count() const noexcept { return cells_; }
  /// max over x of |G_x| - 1.
  std::size_t max_degree() const noexcept { return max_degree_; }

  /// Throws std::out_of_range for x >= vertex_count().
  std::span<const VertexId> closed_neighborhood(VertexId x) const;

  std::span<const VertexId> neighbors(VertexId x) const noexcept {
    return {adjacency_.data() + offsets_[x], adjacency_.data() + offsets_[x + 1]};
  }

  VertexId vertex_at(const Site& site) const;
  Site site_of(VertexId x) const;

 private:
  friend Graph build_layered(std::size_t, std::size_t, std::vector<std::size_t>,
                             std::vector<EdgeTemplate>, Boundary);
  friend Graph build_torus(std::size_t, std::vector<std::size_t>, Boundary);

  GraphKind kind_ = GraphKind::torus;
  Boundary boundary_ = Boundary::periodic;
  std::size_t layers_ = 1;
  std::size_t cells_ = 0;
  std::size_t max_degree_ = 0;
  std::vector<std::size_t> lengths_;
  std::vector<EdgeTemplate> templates_;
  std::vector<std::size_t> offsets_{0};
  std::vector<VertexId> adjacency_;
};

/// d-dimensional torus (Z/L_0) x ... x (Z/L_{d-1}) with nearest-neighbor edges.
/// Throws std::invalid_argument on d = 0, lengths.size() != d, a length < 2,
/// or a vertex count that does not fit VertexId.
Graph build_torus(std::size_t d, std::vector<std::size_t> lengths,
                  Boundary boundary = Boundary::periodic);

/// Layered periodic graph [J] x (Z/L)^d whose edge set is the translation
/// closure of `templates`, symmetrized. Offsets are reduced modulo lengths;
/// a template that reduces to a self-loop is rejected (self-membership in G_x
/// is implicit).
Graph build_layered(std::size_t layers, std::size_t d, std::vector<std::size_t> lengths,
                    std::vector<EdgeTemplate> templates, Boundary boundary = Boundary::periodic);

}  // namespace dclust
