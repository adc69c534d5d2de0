#include "dclust/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "dclust/cluster.hpp"
#include "dclust/engine.hpp"
#include "dclust/rng.hpp"

namespace dclust::oracle {

namespace {

using Config = std::vector<Rational>;

Config to_rational(const ExactField& field) {
  Config out;
  out.reserve(field.size());
  for (ExactValue v : field.values) {
    if (ResourceTraits<ExactValue>::is_infinite(v))
      throw std::invalid_argument("oracle: Infinite values are not supported");
    out.emplace_back(v);
  }
  return out;
}

std::vector<ExactValue> to_exact(const Config& cfg) {
  std::vector<ExactValue> out;
  out.reserve(cfg.size());
  for (const Rational& v : cfg) {
    if (denominator(v) != 1) throw std::logic_error("oracle: non-integer resource in exact mode");
    out.push_back(static_cast<ExactValue>(numerator(v)));
  }
  return out;
}

void check_shape(std::span<const Rational> field, const Graph& g) {
  if (field.size() != g.vertex_count()) throw std::invalid_argument("oracle: field length does not match the graph");
}

std::vector<VertexId> argmax_exact(const std::vector<ExactValue>& field, const Graph& g, VertexId x) {
  if (field[x] == 0) return {x};
  const auto nb = g.closed_neighborhood(x);
  ExactValue best = field[x];
  for (VertexId y : nb) best = std::max(best, field[y]);
  std::vector<VertexId> out;
  for (VertexId y : nb)
    if (field[y] == best) out.push_back(y);
  return out;
}

}  // namespace

std::vector<VertexId> argmax_set(std::span<const Rational> field, const Graph& g, VertexId x) {
  check_shape(field, g);
  if (field[x] == 0) return {x};
  const auto nb = g.closed_neighborhood(x);
  Rational best = field[x];
  for (VertexId y : nb) best = std::max(best, field[y]);
  std::vector<VertexId> out;
  for (VertexId y : nb)
    if (field[y] == best) out.push_back(y);
  return out;
}

std::vector<Rational> naive_step(std::span<const Rational> field, const Graph& g,
                                 const TieChoices& choices) {
  check_shape(field, g);
  const std::size_t n = g.vertex_count();
  std::vector<VertexId> a(n);
  for (VertexId x = 0; x < n; ++x) {
    const auto m = argmax_set(field, g, x);
    const auto it = choices.find(x);
    if (it == choices.end()) {
      if (m.size() > 1) throw std::invalid_argument("oracle: missing tie choice for vertex " + std::to_string(x));
      a[x] = m.front();
    } else {
      if (std::find(m.begin(), m.end(), it->second) == m.end())
        throw std::invalid_argument("oracle: tie choice for vertex " + std::to_string(x) +
                                    " is not in its argmax set");
      a[x] = it->second;
    }
  }
  std::vector<Rational> next(n, Rational(0));
  for (VertexId y = 0; y < n; ++y)
    for (VertexId x = 0; x < n; ++x)
      if (a[x] == y) next[y] += field[x];
  return next;
}

ExactField naive_step(const ExactField& field, const Graph& g, const TieChoices& choices) {
  const Config cfg = to_rational(field);
  ExactField out;
  out.values = to_exact(naive_step(cfg, g, choices));
  out.step = field.step + 1;
  return out;
}

Rational OutcomeDistribution::total() const {
  Rational sum = 0;
  for (const auto& o : outcomes) sum += o.probability;
  return sum;
}

Rational OutcomeDistribution::probability_of(const std::vector<ExactValue>& config) const {
  const auto it = std::lower_bound(outcomes.begin(), outcomes.end(), config,
                                   [](const Outcome& o, const auto& c) { return o.config < c; });
  return it != outcomes.end() && it->config == config ? it->probability : Rational(0);
}

OutcomeDistribution enumerate_outcomes(const ExactField& field, const Graph& g, std::size_t horizon) {
  const std::size_t n = g.vertex_count();
  if (n > kMaxVertices) throw GuardError("oracle: enumeration limited to " + std::to_string(kMaxVertices) + " vertices");
  if (horizon > kMaxHorizon) throw GuardError("oracle: enumeration limited to horizon " + std::to_string(kMaxHorizon));
  check_shape(to_rational(field), g);

  // Resources stay integral, so only probabilities need rationals.
  using State = std::vector<ExactValue>;
  std::map<State, Rational> current{{field.values, Rational(1)}};
  std::size_t work = 0;
  for (std::size_t h = 0; h < horizon; ++h) {
    std::map<State, Rational> after;
    for (const auto& [cfg, p] : current) {
      // Route vertices one at a time, merging equal partial configurations.
      std::map<State, Rational> partial{{State(n, 0), Rational(1)}};
      for (VertexId x = 0; x < n; ++x) {
        const auto choices = argmax_exact(cfg, g, x);
        const Rational share(1, static_cast<long>(choices.size()));
        work += partial.size() * choices.size();
        if (work > kMaxWork) throw GuardError("oracle: enumeration exceeds the work budget");
        std::map<State, Rational> routed;
        for (const auto& [part, q] : partial) {
          for (VertexId y : choices) {
            State next = part;
            next[y] = ResourceTraits<ExactValue>::add(next[y], cfg[x]);
            routed[std::move(next)] += q * share;
          }
        }
        if (routed.size() > kMaxStates) throw GuardError("oracle: enumeration exceeds the state budget");
        partial = std::move(routed);
      }
      for (const auto& [cfg_next, q] : partial) after[cfg_next] += p * q;
      if (after.size() > kMaxStates) throw GuardError("oracle: enumeration exceeds the state budget");
    }
    current = std::move(after);
  }

  OutcomeDistribution dist;
  dist.horizon = horizon;
  // std::map iteration is already sorted by configuration.
  for (const auto& [cfg, p] : current) dist.outcomes.push_back({cfg, p});
  return dist;
}

ComparisonReport compare_engine_oracle(const Graph& g, const ExactField& field0, std::size_t horizon,
                                       std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("oracle: trials must be positive");
  const OutcomeDistribution exact = enumerate_outcomes(field0, g, horizon);

  std::map<std::vector<ExactValue>, std::size_t> tally;
  for (std::size_t t = 0; t < trials; ++t) {
    ExactField f = field0;
    ClusterState clusters(g.vertex_count());
    const std::uint64_t trial_seed = derive_seed(seed, t);
    for (std::size_t h = 0; h < horizon; ++h) step(f, clusters, g, trial_seed);
    ++tally[f.values];
  }

  ComparisonReport report;
  report.horizon = horizon;
  report.trials = trials;
  report.seed = seed;
  const double n = static_cast<double>(trials);
  for (const auto& o : exact.outcomes) {
    OutcomeComparison c;
    c.config = o.config;
    c.exact = o.probability;
    const auto it = tally.find(o.config);
    c.count = it == tally.end() ? 0 : it->second;
    c.empirical = static_cast<double>(c.count) / n;
    const double p = static_cast<double>(o.probability);
    c.abs_error = std::fabs(c.empirical - p);
    report.max_abs_error = std::max(report.max_abs_error, c.abs_error);
    const double expected = n * p;
    report.chi_square += (static_cast<double>(c.count) - expected) * (static_cast<double>(c.count) - expected) / expected;
    report.outcomes.push_back(std::move(c));
  }
  for (const auto& [cfg, count] : tally)
    if (exact.probability_of(cfg) == 0) report.unexpected += count;
  report.degrees_of_freedom = exact.outcomes.empty() ? 0 : exact.outcomes.size() - 1;
  if (report.unexpected > 0) report.max_abs_error = std::max(report.max_abs_error, static_cast<double>(report.unexpected) / n);
  return report;
}

}  // namespace dclust::oracle
