#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "dclust/graph.hpp"
#include "dclust/value.hpp"

namespace dclust {

/// Resource configuration C_n: one value per vertex plus the step index n.
template <Resource T>
struct Field {
  std::vector<T> values;
  std::uint64_t step = 0;

  std::size_t size() const noexcept { return values.size(); }
  T operator[](std::size_t x) const noexcept { return values[x]; }
  bool operator==(const Field&) const = default;
};

using ExactField = Field<ExactValue>;
using RealField = Field<RealValue>;

// Initial laws. Parameters that may be Infinite (constant, two_point,
// pattern) accept +inf.
namespace law {

struct Constant {
  double value = 1.0;
};
struct UniformReal {
  double a = 0.0;
  double b = 1.0;
};
struct Exponential {
  double rate = 1.0;
};
/// Density shape * scale^shape / x^(shape+1) on [scale, inf).
struct Pareto {
  double shape = 1.0;
  double scale = 1.0;
};
/// v1 with probability p, otherwise v2.
struct TwoPoint {
  double v1 = 1.0;
  double p = 0.5;
  double v2 = 0.0;
};
struct UniformInt {
  std::uint64_t a = 0;
  std::uint64_t b = 9;
};
/// Number of failures before the first success: P(k) = p (1-p)^k, k >= 0.
struct Geometric {
  double p = 0.5;
};
/// Periodic tiling. `shape` holds the period along each axis (row-major
/// values, last axis fastest); empty shape means a 1-D period of values.size().
struct Pattern {
  std::vector<double> values;
  std::vector<std::size_t> shape;
  bool random_shift = false;
};

}  // namespace law

using Law = std::variant<law::Constant, law::UniformReal, law::Exponential, law::Pareto,
                         law::TwoPoint, law::UniformInt, law::Geometric, law::Pattern>;

struct DistributionSpec {
  Law law = law::Constant{};
  ValueMode mode = ValueMode::exact;
};

std::string law_name(const Law& law);

/// True when every value the law can produce is a nonnegative integer or +inf.
bool is_integer_valued(const Law& law);

/// Exact for integer-valued laws, real otherwise.
ValueMode default_mode(const Law& law);

/// Throws std::invalid_argument naming the offending parameter.
void validate(const DistributionSpec& spec);

/// I.i.d. draws per vertex, vertex x using the stream keyed by (seed, x).
/// Pattern laws are forwarded to pattern_field. T must match spec.mode.
template <Resource T>
Field<T> sample_field(const Graph& g, const DistributionSpec& spec, std::uint64_t seed);

/// Tiles a pattern over a torus; with random_shift, applies one cyclic shift
/// drawn uniformly from the seed. Throws std::invalid_argument when the
/// graph is not a torus or a period does not divide the matching length.
template <Resource T>
Field<T> pattern_field(const Graph& g, const law::Pattern& pattern, std::uint64_t seed);

/// Field from explicit values (value count must equal vertex_count).
template <Resource T>
Field<T> make_field(const Graph& g, std::vector<T> values);

}  // namespace dclust
