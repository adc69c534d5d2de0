#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dclust/graph.hpp"
#include "dclust/init.hpp"

// Brute-force reference for the dynamics on tiny instances. Nothing here
// calls into the engine except compare_engine_oracle, which exists to
// confront the two.
namespace dclust::oracle {

using Rational = boost::multiprecision::cpp_rational;

/// Designated target for each tied vertex.
using TieChoices = std::map<VertexId, VertexId>;

inline constexpr std::size_t kMaxVertices = 16;
inline constexpr std::size_t kMaxHorizon = 6;
/// Distinct partial configurations kept while branching over one step.
inline constexpr std::size_t kMaxStates = 200'000;
/// Partial-configuration updates across the whole enumeration.
inline constexpr std::size_t kMaxWork = 20'000'000;

class GuardError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// {y in G_x : C(y) = max over G_x}; {x} when C(x) = 0.
std::vector<VertexId> argmax_set(std::span<const Rational> field, const Graph& g, VertexId x);

/// Literal one-step update. Every vertex whose argmax set has more than one
/// element needs an entry in `choices`, and every entry must lie in the
/// argmax set; std::invalid_argument otherwise.
std::vector<Rational> naive_step(std::span<const Rational> field, const Graph& g,
                                 const TieChoices& choices);

/// Exact-mode convenience wrapper; Infinite values are rejected.
ExactField naive_step(const ExactField& field, const Graph& g, const TieChoices& choices);

struct Outcome {
  std::vector<ExactValue> config;
  Rational probability;
};

/// Distribution of C_horizon, sorted by configuration.
struct OutcomeDistribution {
  std::vector<Outcome> outcomes;
  std::size_t horizon = 0;

  Rational total() const;
  /// 0 for configurations that cannot occur.
  Rational probability_of(const std::vector<ExactValue>& config) const;
};

/// Branches over every joint tie-break assignment, each with probability
/// prod 1/tie_size, for `horizon` steps and merges equal configurations.
/// Throws GuardError beyond kMaxVertices, kMaxHorizon, kMaxStates or kMaxWork.
OutcomeDistribution enumerate_outcomes(const ExactField& field, const Graph& g, std::size_t horizon);

struct OutcomeComparison {
  std::vector<ExactValue> config;
  Rational exact;
  std::size_t count = 0;
  double empirical = 0.0;
  double abs_error = 0.0;
};

struct ComparisonReport {
  std::size_t horizon = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<OutcomeComparison> outcomes;
  /// Trials that ended in a configuration the enumeration gives probability 0.
  std::size_t unexpected = 0;
  double max_abs_error = 0.0;
  /// Pearson statistic over the enumerated outcomes.
  double chi_square = 0.0;
  std::size_t degrees_of_freedom = 0;

  bool within(double tolerance) const noexcept { return unexpected == 0 && max_abs_error <= tolerance; }
};

/// Runs the engine `trials` times for `horizon` steps (trial t uses
/// derive_seed(seed, t)) and compares outcome frequencies with the exact
/// enumeration.
ComparisonReport compare_engine_oracle(const Graph& g, const ExactField& field0, std::size_t horizon,
                                       std::size_t trials, std::uint64_t seed);

}  // namespace dclust::oracle
