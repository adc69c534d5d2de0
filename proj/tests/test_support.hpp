#pragma once

#include <cmath>
#include <vector>

#include <dclust/graph.hpp>
#include <dclust/init.hpp>

namespace dclust::testing {

inline Graph cycle(std::size_t n) { return build_torus(1, {n}); }

inline ExactField exact(std::vector<ExactValue> v) { return ExactField{std::move(v), 0}; }

/// |mean - mu| <= 3 sigma / sqrt(n), sigma the per-sample standard deviation.
inline bool within_3sigma(double mean, double mu, double sigma, double n) {
  return std::fabs(mean - mu) <= 3.0 * sigma / std::sqrt(n);
}

}  // namespace dclust::testing
