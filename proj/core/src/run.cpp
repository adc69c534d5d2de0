#include "dclust/run.hpp"

#include <stdexcept>

namespace dclust {

template <Resource T>
RunResult<T> run(const Graph& g, Field<T> initial, const RunOptions<T>& options) {
  const std::uint64_t cadence = options.cadence == 0 ? 1 : options.cadence;
  const std::size_t n = g.vertex_count();

  RunResult<T> result;
  result.joint_thresholds = options.joint;
  result.initial = initial;
  result.d_events.assign(n, 0);
  result.e_events.assign(n, 0);
  result.tie_events.assign(n, 0);

  Simulation<T> sim(g, std::move(initial), options.seed, options.threads);
  for (;;) {
    const StepReport<T>& report = sim.prepare();
    const std::uint64_t step = sim.step_index();
    const bool absorbed = is_absorbed(sim.field(), g);
    if (absorbed && !result.absorbed) {
      result.absorbed = true;
      result.absorption_step = step;
    }
    const bool last = (absorbed && options.stop_on_absorption) || step >= options.max_steps;

    if (step % cadence == 0 || last)
      result.rows.push_back(make_row(report, sim.field(), g, sim.clusters(), options.joint));

    for (std::size_t x = 0; x < n; ++x) {
      result.d_events[x] += report.events[x] == EventTag::D;
      result.e_events[x] += report.events[x] == EventTag::E;
      result.tie_events[x] += report.targets.tie_size[x] > 1;
    }
    if (options.type_window > 0) {
      if (result.trailing_events.size() == options.type_window)
        result.trailing_events.erase(result.trailing_events.begin());
      result.trailing_events.push_back(report.events);
    }

    if (options.observer)
      options.observer(StepView<T>{g, sim.field(), sim.next_values(), report, sim.clusters(), absorbed});

    if (last) break;
    sim.commit();
    ++result.steps_executed;
  }

  result.final_field = sim.field();
  result.last_move.resize(n);
  for (VertexId v = 0; v < n; ++v) result.last_move[v] = sim.clusters().last_move(v);
  return result;
}

template RunResult<ExactValue> run(const Graph&, Field<ExactValue>, const RunOptions<ExactValue>&);
template RunResult<RealValue> run(const Graph&, Field<RealValue>, const RunOptions<RealValue>&);

}  // namespace dclust
