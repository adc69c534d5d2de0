#include "dclust/engine.hpp"

#include <atomic>
#include <stdexcept>

#include "dclust/rng.hpp"

namespace dclust {

namespace {

using Index = std::int64_t;

template <Resource T>
void check_shape(const Field<T>& field, const Graph& g) {
  if (field.size() != g.vertex_count())
    throw std::invalid_argument("engine: field length does not match the graph");
}

template <Resource T>
void compute_targets(const Field<T>& field, const Graph& g, std::uint64_t seed, int threads,
                     TargetMap& out) {
  const Index n = static_cast<Index>(g.vertex_count());
  out.target.resize(n);
  out.tie_size.resize(n);
  const T* c = field.values.data();

#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1)
  for (Index xi = 0; xi < n; ++xi) {
    const auto x = static_cast<VertexId>(xi);
    if (c[x] == ResourceTraits<T>::zero()) {
      out.target[x] = x;
      out.tie_size[x] = 1;
      continue;
    }
    const auto nb = g.neighbors(x);
    T best = c[nb[0]];
    VertexId arg = nb[0];
    std::uint16_t ties = 1;
    for (std::size_t i = 1; i < nb.size(); ++i) {
      const T v = c[nb[i]];
      if (v > best) {
        best = v;
        arg = nb[i];
        ties = 1;
      } else if (v == best) {
        ++ties;
      }
    }
    if (ties > 1) {
      KeyedStream rng(seed, StreamDomain::tie_break, field.step, x);
      auto pick = rng.uniform_below(ties);
      for (VertexId y : nb) {
        if (c[y] == best && pick-- == 0) {
          arg = y;
          break;
        }
      }
    }
    out.target[x] = arg;
    out.tie_size[x] = ties;
  }
}

constexpr EventTag tag_for(bool zero, std::size_t inflow, VertexId first, VertexId x) noexcept {
  if (zero) return EventTag::A;
  if (inflow == 0) return EventTag::E;
  if (inflow > 1) return EventTag::D;
  return first == x ? EventTag::B : EventTag::C;
}

// Builds C_{n+1} and the event tags by scanning each G_y for its sources.
template <Resource T>
void gather(const Field<T>& field, const TargetMap& tm, const Graph& g, int threads,
            std::vector<T>& next, std::vector<EventTag>& events) {
  const Index n = static_cast<Index>(g.vertex_count());
  next.resize(n);
  events.resize(n);
  const T* c = field.values.data();
  std::atomic<bool> overflow{false};

#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1)
  for (Index yi = 0; yi < n; ++yi) {
    const auto y = static_cast<VertexId>(yi);
    T sum = ResourceTraits<T>::zero();
    std::size_t inflow = 0;
    VertexId first = kNoVertex;
    for (VertexId x : g.neighbors(y)) {
      if (tm.target[x] != y) continue;
      if (inflow++ == 0) first = x;
      if (!ResourceTraits<T>::try_add(sum, c[x], sum)) overflow.store(true, std::memory_order_relaxed);
    }
    next[y] = sum;
    events[y] = tag_for(c[y] == ResourceTraits<T>::zero(), inflow, first, y);
  }
  if (overflow.load()) throw OverflowError("engine: exact resource sum overflows at step " +
                                           std::to_string(field.step));
}

template <Resource T>
T total(std::span<const T> values) {
  MassAccumulator<T> acc;
  for (T v : values) acc.add(v);
  return acc.total();
}

template <Resource T>
void summarize(StepReport<T>& r) {
  r.counts.fill(0);
  for (EventTag t : r.events) ++r.counts[static_cast<std::size_t>(t)];
  r.ties = 0;
  r.movers = 0;
  for (std::size_t x = 0; x < r.targets.size(); ++x) {
    r.ties += r.targets.tie_size[x] > 1;
    r.movers += r.targets.target[x] != x;
  }
}

}  // namespace

template <Resource T>
TargetMap targets(const Field<T>& field, const Graph& g, std::uint64_t seed, int threads) {
  check_shape(field, g);
  TargetMap out;
  compute_targets(field, g, seed, threads, out);
  return out;
}

template <Resource T>
std::vector<EventTag> classify(const Field<T>& field, const TargetMap& tm, const Graph& g) {
  check_shape(field, g);
  if (tm.size() != g.vertex_count()) throw std::invalid_argument("engine: target map does not match the graph");
  std::vector<EventTag> events(g.vertex_count());
  for (VertexId x = 0; x < g.vertex_count(); ++x) {
    std::size_t inflow = 0;
    VertexId first = kNoVertex;
    for (VertexId z : g.neighbors(x)) {
      if (tm.target[z] != x) continue;
      if (inflow++ == 0) first = z;
    }
    events[x] = tag_for(field.values[x] == ResourceTraits<T>::zero(), inflow, first, x);
  }
  return events;
}

template <Resource T>
bool is_absorbed(const Field<T>& field, const Graph& g) {
  check_shape(field, g);
  const T zero = ResourceTraits<T>::zero();
  for (VertexId x = 0; x < g.vertex_count(); ++x) {
    if (field.values[x] == zero) continue;
    for (VertexId z : g.neighbors(x))
      if (z != x && field.values[z] != zero) return false;
  }
  return true;
}

template <Resource T>
Simulation<T>::Simulation(const Graph& g, Field<T> initial, std::uint64_t seed, int threads)
    : graph_(&g),
      field_(std::move(initial)),
      clusters_(g.vertex_count()),
      seed_(seed),
      threads_(threads < 1 ? 1 : threads) {
  check_shape(field_, g);
}

template <Resource T>
const StepReport<T>& Simulation<T>::prepare() {
  if (prepared_) return report_;
  report_.step = field_.step;
  compute_targets(field_, *graph_, seed_, threads_, report_.targets);
  gather(field_, report_.targets, *graph_, threads_, next_, report_.events);
  summarize(report_);
  report_.mass_before = total<T>(field_.values);
  report_.mass_after = total<T>(next_);
  prepared_ = true;
  return report_;
}

template <Resource T>
void Simulation<T>::commit() {
  prepare();
  clusters_.advance(report_.targets.target, *graph_, field_.step);
  field_.values.swap(next_);
  ++field_.step;
  prepared_ = false;
}

template <Resource T>
StepReport<T> step(Field<T>& field, ClusterState& clusters, const Graph& g, std::uint64_t seed,
                   int threads) {
  check_shape(field, g);
  if (clusters.origin_count() != g.vertex_count())
    throw std::invalid_argument("engine: cluster state does not match the graph");
  StepReport<T> report;
  report.step = field.step;
  compute_targets(field, g, seed, threads < 1 ? 1 : threads, report.targets);
  std::vector<T> next;
  gather(field, report.targets, g, threads < 1 ? 1 : threads, next, report.events);
  summarize(report);
  report.mass_before = total<T>(field.values);
  report.mass_after = total<T>(next);
  clusters.advance(report.targets.target, g, field.step);
  field.values.swap(next);
  ++field.step;
  return report;
}

template TargetMap targets(const Field<ExactValue>&, const Graph&, std::uint64_t, int);
template TargetMap targets(const Field<RealValue>&, const Graph&, std::uint64_t, int);
template std::vector<EventTag> classify(const Field<ExactValue>&, const TargetMap&, const Graph&);
template std::vector<EventTag> classify(const Field<RealValue>&, const TargetMap&, const Graph&);
template bool is_absorbed(const Field<ExactValue>&, const Graph&);
template bool is_absorbed(const Field<RealValue>&, const Graph&);
template class Simulation<ExactValue>;
template class Simulation<RealValue>;
template StepReport<ExactValue> step(Field<ExactValue>&, ClusterState&, const Graph&, std::uint64_t, int);
template StepReport<RealValue> step(Field<RealValue>&, ClusterState&, const Graph&, std::uint64_t, int);

}  // namespace dclust
