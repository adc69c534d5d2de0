#include "dclust/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace dclust {

namespace {

std::size_t checked_cell_count(std::size_t layers, const std::vector<std::size_t>& lengths) {
  constexpr std::size_t kLimit = kNoVertex;  // largest id is reserved
  std::size_t total = layers;
  for (std::size_t len : lengths) {
    if (len != 0 && total > kLimit / len)
      throw std::invalid_argument("graph: vertex count overflows the vertex index type");
    total *= len;
  }
  if (total >= kLimit) throw std::invalid_argument("graph: vertex count overflows the vertex index type");
  return total / layers;
}

std::int64_t wrap(std::int64_t v, std::int64_t len) {
  const std::int64_t r = v % len;
  return r < 0 ? r + len : r;
}

}  // namespace

std::span<const VertexId> Graph::closed_neighborhood(VertexId x) const {
  if (x >= vertex_count())
    throw std::out_of_range("graph: vertex id " + std::to_string(x) + " out of range");
  return neighbors(x);
}

VertexId Graph::vertex_at(const Site& site) const {
  if (site.layer >= layers_ || site.coords.size() != lengths_.size())
    throw std::out_of_range("graph: site outside the graph");
  std::size_t id = 0;
  for (std::size_t i = 0; i < lengths_.size(); ++i) {
    if (site.coords[i] >= lengths_[i]) throw std::out_of_range("graph: site outside the graph");
    id = id * lengths_[i] + site.coords[i];
  }
  return static_cast<VertexId>(site.layer * cells_ + id);
}

Site Graph::site_of(VertexId x) const {
  if (x >= vertex_count()) throw std::out_of_range("graph: vertex id out of range");
  Site site;
  site.layer = x / cells_;
  std::size_t rem = x % cells_;
  site.coords.assign(lengths_.size(), 0);
  for (std::size_t i = lengths_.size(); i-- > 0;) {
    site.coords[i] = rem % lengths_[i];
    rem /= lengths_[i];
  }
  return site;
}

Graph build_layered(std::size_t layers, std::size_t d, std::vector<std::size_t> lengths,
                    std::vector<EdgeTemplate> templates, Boundary boundary) {
  if (layers == 0) throw std::invalid_argument("graph: layer count must be >= 1");
  if (d == 0) throw std::invalid_argument("graph: dimension must be >= 1");
  if (lengths.size() != d)
    throw std::invalid_argument("graph: expected " + std::to_string(d) + " lengths, got " +
                                std::to_string(lengths.size()));
  for (std::size_t len : lengths)
    if (len < 2) throw std::invalid_argument("graph: every length must be >= 2");

  for (const auto& t : templates) {
    if (t.from_layer >= layers || t.to_layer >= layers)
      throw std::invalid_argument("graph: edge template references layer outside [0, " +
                                  std::to_string(layers) + ")");
    if (t.offset.size() != d)
      throw std::invalid_argument("graph: edge template offset must have " + std::to_string(d) +
                                  " components");
    bool zero = true;
    for (std::size_t i = 0; i < d; ++i)
      zero = zero && wrap(t.offset[i], static_cast<std::int64_t>(lengths[i])) == 0;
    if (zero && t.from_layer == t.to_layer)
      throw std::invalid_argument("graph: edge template is a self-loop");
  }

  Graph g;
  g.kind_ = GraphKind::layered;
  g.boundary_ = boundary;
  g.layers_ = layers;
  g.cells_ = checked_cell_count(layers, lengths);
  g.lengths_ = std::move(lengths);
  g.templates_ = std::move(templates);

  const std::size_t n = layers * g.cells_;
  std::vector<std::vector<VertexId>> adj(n);
  for (std::size_t v = 0; v < n; ++v) adj[v].push_back(static_cast<VertexId>(v));

  std::vector<std::size_t> coords(d);
  for (std::size_t cell = 0; cell < g.cells_; ++cell) {
    std::size_t rem = cell;
    for (std::size_t i = d; i-- > 0;) {
      coords[i] = rem % g.lengths_[i];
      rem /= g.lengths_[i];
    }
    for (const auto& t : g.templates_) {
      std::size_t target = 0;
      bool inside = true;
      for (std::size_t i = 0; i < d; ++i) {
        const auto len = static_cast<std::int64_t>(g.lengths_[i]);
        std::int64_t c = static_cast<std::int64_t>(coords[i]) + t.offset[i];
        if (boundary == Boundary::periodic) {
          c = wrap(c, len);
        } else if (c < 0 || c >= len) {
          inside = false;
          break;
        }
        target = target * g.lengths_[i] + static_cast<std::size_t>(c);
      }
      if (!inside) continue;
      const std::size_t from = t.from_layer * g.cells_ + cell;
      const std::size_t to = t.to_layer * g.cells_ + target;
      adj[from].push_back(static_cast<VertexId>(to));
      adj[to].push_back(static_cast<VertexId>(from));
    }
  }

  g.offsets_.assign(1, 0);
  g.offsets_.reserve(n + 1);
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    if (list.size() > 0xffff) throw std::invalid_argument("graph: neighborhood larger than 65535 vertices");
    g.max_degree_ = std::max(g.max_degree_, list.size() - 1);
    g.adjacency_.insert(g.adjacency_.end(), list.begin(), list.end());
    g.offsets_.push_back(g.adjacency_.size());
  }
  return g;
}

Graph build_torus(std::size_t d, std::vector<std::size_t> lengths, Boundary boundary) {
  std::vector<EdgeTemplate> unit;
  for (std::size_t i = 0; i < d; ++i) {
    EdgeTemplate t;
    t.offset.assign(d, 0);
    t.offset[i] = 1;
    unit.push_back(std::move(t));
  }
  Graph g = build_layered(1, d, std::move(lengths), std::move(unit), boundary);
  g.kind_ = GraphKind::torus;
  return g;
}

}  // namespace dclust
