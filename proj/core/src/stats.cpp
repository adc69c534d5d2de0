#include "dclust/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dclust {

template <Resource T>
double activity(const StepReport<T>& report) {
  const std::size_t n = report.targets.size();
  return n == 0 ? 0.0 : static_cast<double>(report.movers) / static_cast<double>(n);
}

std::vector<std::size_t> in_degrees(const TargetMap& targets) {
  std::vector<std::size_t> deg(targets.size(), 0);
  for (VertexId a : targets.target) ++deg.at(a);
  return deg;
}

std::size_t in_degree_total(const TargetMap& targets) {
  std::size_t total = 0;
  for (std::size_t d : in_degrees(targets)) total += d;
  return total;
}

template <Resource T>
std::vector<T> gaps(const Field<T>& field, const Graph& g) {
  if (field.size() != g.vertex_count()) throw std::invalid_argument("stats: field length does not match the graph");
  std::vector<T> out(field.size(), ResourceTraits<T>::zero());
  for (VertexId x = 0; x < field.size(); ++x) {
    const T own = field.values[x];
    if (own == ResourceTraits<T>::zero()) continue;
    T best = own;
    for (VertexId y : g.neighbors(x)) best = std::max(best, field.values[y]);
    out[x] = ResourceTraits<T>::gap(best, own);
  }
  return out;
}

template <Resource T>
GapStats<T> gap_stats(const Field<T>& field, const Graph& g) {
  const auto per_vertex = gaps(field, g);
  GapStats<T> s;
  double sum = 0.0;
  for (VertexId x = 0; x < field.size(); ++x) {
    if (field.values[x] == ResourceTraits<T>::zero()) continue;
    ++s.active_count;
    s.max_gap = std::max(s.max_gap, per_vertex[x]);
    sum += ResourceTraits<T>::to_double(per_vertex[x]);
  }
  if (s.active_count > 0) s.mean_gap = sum / static_cast<double>(s.active_count);
  return s;
}

std::map<std::size_t, std::size_t> cluster_histogram(const ClusterState& clusters) {
  std::map<std::size_t, std::size_t> hist;
  for (VertexId x = 0; x < clusters.origin_count(); ++x)
    if (const std::size_t s = clusters.size_at(x)) ++hist[s];
  return hist;
}

std::size_t max_cluster(const ClusterState& clusters) {
  std::size_t best = 0;
  for (VertexId x = 0; x < clusters.origin_count(); ++x) best = std::max(best, clusters.size_at(x));
  return best;
}

double cluster_moment(const ClusterState& clusters, double alpha) {
  if (!(alpha >= 1.0)) throw std::invalid_argument("stats: cluster moment requires alpha >= 1");
  const std::size_t n = clusters.origin_count();
  if (n == 0) return 0.0;
  if (alpha == 1.0) {
    std::size_t total = 0;
    for (VertexId x = 0; x < n; ++x) total += clusters.size_at(x);
    return static_cast<double>(total) / static_cast<double>(n);
  }
  double total = 0.0;
  for (VertexId x = 0; x < n; ++x)
    if (const std::size_t s = clusters.size_at(x)) total += std::pow(static_cast<double>(s), alpha);
  return total / static_cast<double>(n);
}

template <Resource T>
double joint_gap_fraction(std::span<const T> gaps, const ClusterState& clusters, double delta,
                          std::size_t k) {
  if (gaps.size() != clusters.origin_count()) throw std::invalid_argument("stats: gap vector does not match the clusters");
  if (gaps.empty()) return 0.0;
  std::size_t hits = 0;
  for (VertexId x = 0; x < gaps.size(); ++x) {
    const double g = ResourceTraits<T>::to_double(gaps[x]);
    if (g > 0.0 && g < delta && clusters.size_at(x) <= k) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(gaps.size());
}

template <Resource T>
TimeSeriesRow<T> make_row(const StepReport<T>& report, const Field<T>& field, const Graph& g,
                          const ClusterState& clusters, std::span<const JointThreshold> joint) {
  TimeSeriesRow<T> row;
  row.step = report.step;
  row.activity = activity(report);
  row.ties = report.ties;
  row.counts = report.counts;

  const auto per_vertex = gaps(field, g);
  double sum = 0.0;
  for (VertexId x = 0; x < field.size(); ++x) {
    if (field.values[x] == ResourceTraits<T>::zero()) continue;
    ++row.active_count;
    row.max_gap = std::max(row.max_gap, per_vertex[x]);
    sum += ResourceTraits<T>::to_double(per_vertex[x]);
  }
  if (row.active_count > 0) row.mean_gap = sum / static_cast<double>(row.active_count);

  row.max_cluster = max_cluster(clusters);
  row.moment_alpha2 = cluster_moment(clusters, 2.0);
  row.joint.reserve(joint.size());
  for (const auto& j : joint)
    row.joint.push_back(joint_gap_fraction<T>(per_vertex, clusters, j.delta, j.k));
  row.total_mass = report.mass_before;
  return row;
}

template <Resource T>
MovingMass moving_mass_fraction(const RunResult<T>& run, std::uint64_t n) {
  MovingMass out;
  out.lower_bound = !run.absorbed;
  const std::size_t v = run.last_move.size();
  if (v == 0) return out;
  std::size_t moving = 0;
  MassAccumulator<RealValue> mass_all;
  MassAccumulator<RealValue> mass_moving;
  for (std::size_t x = 0; x < v; ++x) {
    const double m0 = ResourceTraits<T>::to_double(run.initial.values.at(x));
    mass_all.add(m0);
    if (run.last_move[x] && *run.last_move[x] > n) {
      ++moving;
      mass_moving.add(m0);
    }
  }
  out.origin_fraction = static_cast<double>(moving) / static_cast<double>(v);
  const double total = mass_all.total();
  if (total > 0.0 && std::isfinite(total)) out.mass_fraction = mass_moving.total() / total;
  return out;
}

template <Resource T>
std::vector<VertexType> vertex_type(const RunResult<T>& run) {
  const std::size_t v = run.final_field.size();
  std::vector<VertexType> types(v, VertexType::undetermined);
  if (run.absorbed) {
    for (std::size_t x = 0; x < v; ++x)
      types[x] = run.final_field.values[x] == ResourceTraits<T>::zero() ? VertexType::A : VertexType::B;
    return types;
  }
  if (run.trailing_events.empty()) return types;
  for (std::size_t x = 0; x < v; ++x) {
    const EventTag first = run.trailing_events.front().at(x);
    const bool uniform = std::all_of(run.trailing_events.begin(), run.trailing_events.end(),
                                     [&](const auto& tags) { return tags.at(x) == first; });
    if (!uniform) continue;
    switch (first) {
      case EventTag::A: types[x] = VertexType::A; break;
      case EventTag::B: types[x] = VertexType::B; break;
      case EventTag::C: types[x] = VertexType::C; break;
      default: break;
    }
  }
  return types;
}

template <Resource T>
void InvariantAudit<T>::observe(const StepView<T>& view) {
  ++steps_;
  const auto& g = view.graph;
  const auto& r = view.report;
  const std::size_t n = g.vertex_count();
  const T zero = ResourceTraits<T>::zero();

  // Recount both sides instead of trusting the report.
  MassAccumulator<T> before, after;
  for (T v : view.field.values) before.add(v);
  for (T v : view.next) after.add(v);
  const T m0 = before.total();
  const T m1 = after.total();
  if constexpr (std::same_as<T, ExactValue>) {
    if (m0 != r.mass_before) flag("mass_report");
    if (m0 != m1) flag("mass_conservation");
  } else {
    if (!(std::isinf(m0) && std::isinf(m1))) {
      const double diff = std::fabs(m1 - m0);
      const double drift = m0 > 0.0 ? diff / m0 : diff;
      max_drift_ = std::max(max_drift_, drift);
      if (!(drift <= tolerance_)) flag("mass_conservation");
    }
  }

  if (in_degree_total(r.targets) != n) flag("in_degree_identity");

  std::size_t covered = 0;
  for (const auto& [size, count] : cluster_histogram(view.clusters)) covered += size * count;
  if (covered != n) flag("cluster_partition");
  if (cluster_moment(view.clusters, 1.0) != 1.0) flag("cluster_moment_alpha1");

  std::size_t tagged = 0;
  for (std::size_t c : r.counts) tagged += c;
  if (tagged != n) flag("one_event_per_vertex");

  e_seen_.resize(n, 0);
  for (VertexId x = 0; x < n; ++x) {
    const T c = view.field.values[x];
    const T next = view.next[x];
    const EventTag tag = r.events[x];
    const VertexId a = r.targets.target[x];
    const auto nb = g.neighbors(x);

    if (tag == EventTag::E && ++e_seen_[x] > 1) flag("e_event_at_most_once");
    if (c == zero && next != zero) flag("zero_stays_zero");
    if (next > c && tag != EventTag::D) flag("growth_only_on_d");
    if (!std::binary_search(nb.begin(), nb.end(), a)) flag("target_in_neighborhood");
    else if (view.field.values[a] < c) flag("neighborhood_max_dominates");
    if (c == zero && a != x) flag("inactive_targets_self");
    if (r.targets.tie_size[x] < 1 || r.targets.tie_size[x] > nb.size()) flag("tie_size_bounds");
  }
}

template double activity(const StepReport<ExactValue>&);
template double activity(const StepReport<RealValue>&);
template std::vector<ExactValue> gaps(const Field<ExactValue>&, const Graph&);
template std::vector<RealValue> gaps(const Field<RealValue>&, const Graph&);
template GapStats<ExactValue> gap_stats(const Field<ExactValue>&, const Graph&);
template GapStats<RealValue> gap_stats(const Field<RealValue>&, const Graph&);
template double joint_gap_fraction(std::span<const ExactValue>, const ClusterState&, double, std::size_t);
template double joint_gap_fraction(std::span<const RealValue>, const ClusterState&, double, std::size_t);
template TimeSeriesRow<ExactValue> make_row(const StepReport<ExactValue>&, const Field<ExactValue>&,
                                            const Graph&, const ClusterState&, std::span<const JointThreshold>);
template TimeSeriesRow<RealValue> make_row(const StepReport<RealValue>&, const Field<RealValue>&,
                                           const Graph&, const ClusterState&, std::span<const JointThreshold>);
template MovingMass moving_mass_fraction(const RunResult<ExactValue>&, std::uint64_t);
template MovingMass moving_mass_fraction(const RunResult<RealValue>&, std::uint64_t);
template std::vector<VertexType> vertex_type(const RunResult<ExactValue>&);
template std::vector<VertexType> vertex_type(const RunResult<RealValue>&);
template class InvariantAudit<ExactValue>;
template class InvariantAudit<RealValue>;

}  // namespace dclust
