#include "dclust/init.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "dclust/rng.hpp"

namespace dclust {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

bool is_integral_or_inf(double v) {
  return std::isinf(v) ? v > 0 : (v >= 0 && std::floor(v) == v && v < 1.8446744073709552e19);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("init: " + what);
}

void require_value(double v, const char* name) {
  require(!std::isnan(v) && v >= 0, std::string(name) + " must be a nonnegative number or inf");
}

template <Resource T>
T convert(double v) {
  if constexpr (std::same_as<T, ExactValue>) {
    if (std::isinf(v)) return ResourceTraits<ExactValue>::infinite();
    const auto out = static_cast<ExactValue>(v);
    if (ResourceTraits<ExactValue>::is_infinite(out))
      throw std::invalid_argument("init: value out of exact range");
    return out;
  } else {
    return v;
  }
}

template <Resource T>
T draw(const Law& law, KeyedStream& rng) {
  return std::visit(
      Overloaded{
          [](const law::Constant& l) { return convert<T>(l.value); },
          [&](const law::UniformReal& l) {
            return convert<T>(std::uniform_real_distribution<double>(l.a, l.b)(rng));
          },
          [&](const law::Exponential& l) {
            return convert<T>(std::exponential_distribution<double>(l.rate)(rng));
          },
          [&](const law::Pareto& l) {
            // inverse CDF on (0, 1]
            const double u = 1.0 - std::generate_canonical<double, 53>(rng);
            return convert<T>(l.scale * std::pow(u, -1.0 / l.shape));
          },
          [&](const law::TwoPoint& l) {
            return convert<T>(std::bernoulli_distribution(l.p)(rng) ? l.v1 : l.v2);
          },
          [&](const law::UniformInt& l) {
            const auto v = std::uniform_int_distribution<std::uint64_t>(l.a, l.b)(rng);
            if constexpr (std::same_as<T, ExactValue>)
              return v;
            else
              return static_cast<double>(v);
          },
          [&](const law::Geometric& l) {
            const auto v = std::geometric_distribution<std::uint64_t>(l.p)(rng);
            if constexpr (std::same_as<T, ExactValue>)
              return v;
            else
              return static_cast<double>(v);
          },
          [](const law::Pattern&) -> T { throw std::logic_error("init: pattern is not i.i.d."); },
      },
      law);
}

}  // namespace

std::string law_name(const Law& law) {
  return std::visit(Overloaded{
                        [](const law::Constant&) { return "constant"; },
                        [](const law::UniformReal&) { return "uniform_real"; },
                        [](const law::Exponential&) { return "exponential"; },
                        [](const law::Pareto&) { return "pareto"; },
                        [](const law::TwoPoint&) { return "two_point"; },
                        [](const law::UniformInt&) { return "uniform_int"; },
                        [](const law::Geometric&) { return "geometric"; },
                        [](const law::Pattern&) { return "pattern"; },
                    },
                    law);
}

bool is_integer_valued(const Law& law) {
  return std::visit(Overloaded{
                        [](const law::Constant& l) { return is_integral_or_inf(l.value); },
                        [](const law::UniformReal&) { return false; },
                        [](const law::Exponential&) { return false; },
                        [](const law::Pareto&) { return false; },
                        [](const law::TwoPoint& l) {
                          return is_integral_or_inf(l.v1) && is_integral_or_inf(l.v2);
                        },
                        [](const law::UniformInt&) { return true; },
                        [](const law::Geometric&) { return true; },
                        [](const law::Pattern& l) {
                          for (double v : l.values)
                            if (!is_integral_or_inf(v)) return false;
                          return true;
                        },
                    },
                    law);
}

ValueMode default_mode(const Law& law) {
  return is_integer_valued(law) ? ValueMode::exact : ValueMode::real;
}

void validate(const DistributionSpec& spec) {
  std::visit(Overloaded{
                 [](const law::Constant& l) { require_value(l.value, "constant.value"); },
                 [](const law::UniformReal& l) {
                   require(std::isfinite(l.a) && std::isfinite(l.b), "uniform_real bounds must be finite");
                   require(l.a >= 0, "uniform_real.a must be >= 0");
                   require(l.a <= l.b, "uniform_real requires a <= b");
                 },
                 [](const law::Exponential& l) {
                   require(std::isfinite(l.rate) && l.rate > 0, "exponential.rate must be > 0");
                 },
                 [](const law::Pareto& l) {
                   require(std::isfinite(l.shape) && l.shape > 0, "pareto.shape must be > 0");
                   require(std::isfinite(l.scale) && l.scale > 0, "pareto.scale must be > 0");
                 },
                 [](const law::TwoPoint& l) {
                   require_value(l.v1, "two_point.v1");
                   require_value(l.v2, "two_point.v2");
                   require(l.p > 0 && l.p < 1, "two_point.p must lie in (0, 1)");
                 },
                 [](const law::UniformInt& l) {
                   require(l.a <= l.b, "uniform_int requires a <= b");
                   require(l.b < std::numeric_limits<std::uint64_t>::max(), "uniform_int.b out of range");
                 },
                 [](const law::Geometric& l) {
                   require(l.p > 0 && l.p < 1, "geometric.p must lie in (0, 1)");
                 },
                 [](const law::Pattern& l) {
                   require(!l.values.empty(), "pattern.values must not be empty");
                   for (double v : l.values) require_value(v, "pattern.values");
                   if (!l.shape.empty()) {
                     std::size_t n = 1;
                     for (std::size_t s : l.shape) {
                       require(s >= 1, "pattern.shape entries must be >= 1");
                       n *= s;
                     }
                     require(n == l.values.size(), "pattern.shape does not match the value count");
                   }
                 },
             },
             spec.law);
  if (spec.mode == ValueMode::exact)
    require(is_integer_valued(spec.law), "exact mode requires an integer-valued law (" +
                                             law_name(spec.law) + ")");
}

template <Resource T>
Field<T> sample_field(const Graph& g, const DistributionSpec& spec, std::uint64_t seed) {
  validate(spec);
  if (spec.mode != ResourceTraits<T>::mode)
    throw std::invalid_argument("init: field type does not match the distribution's value mode");
  if (const auto* pattern = std::get_if<law::Pattern>(&spec.law))
    return pattern_field<T>(g, *pattern, seed);

  Field<T> field;
  field.values.resize(g.vertex_count());
  for (std::size_t x = 0; x < field.values.size(); ++x) {
    KeyedStream rng(seed, StreamDomain::init, x);
    field.values[x] = draw<T>(spec.law, rng);
  }
  return field;
}

template <Resource T>
Field<T> pattern_field(const Graph& g, const law::Pattern& pattern, std::uint64_t seed) {
  validate(DistributionSpec{pattern, ValueMode::real});
  if (g.kind() != GraphKind::torus) throw std::invalid_argument("init: pattern requires a torus graph");
  if constexpr (std::same_as<T, ExactValue>)
    if (!is_integer_valued(pattern)) throw std::invalid_argument("init: exact mode requires integer pattern values");

  const std::size_t d = g.dimension();
  std::vector<std::size_t> period = pattern.shape;
  if (period.empty()) {
    if (d != 1) throw std::invalid_argument("init: pattern.shape is required when d > 1");
    period = {pattern.values.size()};
  }
  if (period.size() != d)
    throw std::invalid_argument("init: pattern.shape must have one entry per dimension");
  for (std::size_t i = 0; i < d; ++i)
    if (g.lengths()[i] % period[i] != 0)
      throw std::invalid_argument("init: pattern period " + std::to_string(period[i]) +
                                  " does not divide length " + std::to_string(g.lengths()[i]));

  std::vector<std::size_t> shift(d, 0);
  if (pattern.random_shift) {
    KeyedStream rng(seed, StreamDomain::pattern_shift, 0);
    for (std::size_t i = 0; i < d; ++i) shift[i] = rng.uniform_below(period[i]);
  }

  Field<T> field;
  field.values.resize(g.vertex_count());
  for (VertexId x = 0; x < g.vertex_count(); ++x) {
    const Site site = g.site_of(x);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < d; ++i) idx = idx * period[i] + (site.coords[i] + shift[i]) % period[i];
    field.values[x] = convert<T>(pattern.values[idx]);
  }
  return field;
}

template <Resource T>
Field<T> make_field(const Graph& g, std::vector<T> values) {
  if (values.size() != g.vertex_count())
    throw std::invalid_argument("init: field length does not match the graph");
  for (T v : values)
    if constexpr (std::same_as<T, RealValue>)
      if (std::isnan(v) || v < 0) throw std::invalid_argument("init: values must be >= 0");
  return Field<T>{std::move(values), 0};
}

template Field<ExactValue> sample_field(const Graph&, const DistributionSpec&, std::uint64_t);
template Field<RealValue> sample_field(const Graph&, const DistributionSpec&, std::uint64_t);
template Field<ExactValue> pattern_field(const Graph&, const law::Pattern&, std::uint64_t);
template Field<RealValue> pattern_field(const Graph&, const law::Pattern&, std::uint64_t);
template Field<ExactValue> make_field(const Graph&, std::vector<ExactValue>);
template Field<RealValue> make_field(const Graph&, std::vector<RealValue>);

}  // namespace dclust
