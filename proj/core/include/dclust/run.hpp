#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "dclust/engine.hpp"
#include "dclust/stats.hpp"

namespace dclust {

template <Resource T>
using StepObserver = std::function<void(const StepView<T>&)>;

template <Resource T>
struct RunOptions {
  std::uint64_t max_steps = 100000;
  std::uint64_t seed = 0;
  int threads = 1;
  /// A row is recorded every `cadence` steps, plus the final step.
  std::uint64_t cadence = 1;
  /// When false, keep stepping the (fixed) absorbed state up to max_steps.
  bool stop_on_absorption = true;
  std::vector<JointThreshold> joint;
  std::size_t type_window = 16;
  /// Called for every step, including the final one, before it is applied.
  StepObserver<T> observer;
};

/// Iterates the dynamics from `initial` until absorption or max_steps.
/// Non-absorption is a reported outcome, not an error; OverflowError
/// propagates.
template <Resource T>
RunResult<T> run(const Graph& g, Field<T> initial, const RunOptions<T>& options);

}  // namespace dclust
