#include <benchmark/benchmark.h>

#include <dclust/engine.hpp>
#include <dclust/oracle.hpp>
#include <dclust/stats.hpp>

namespace {

using namespace dclust;

// Steps a fixed uniform field; the state absorbs quickly, after which every
// step still pays for targets, gather and classification.
void BM_StepReal(benchmark::State& state) {
  const auto L = static_cast<std::size_t>(state.range(0));
  const Graph g = build_torus(2, {L, L});
  const auto init = sample_field<RealValue>(g, {law::UniformReal{0.0, 1.0}, ValueMode::real}, 1);
  Simulation<RealValue> sim(g, init, 7, static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(sim.advance().movers);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.vertex_count()));
}
BENCHMARK(BM_StepReal)->Args({64, 1})->Args({256, 1})->Args({256, 4})->Unit(benchmark::kMicrosecond);

// First step of a constant field: every vertex ties over its whole neighborhood.
void BM_TiedTargets(benchmark::State& state) {
  const auto L = static_cast<std::size_t>(state.range(0));
  const Graph g = build_torus(2, {L, L});
  const ExactField f{std::vector<ExactValue>(g.vertex_count(), 1), 0};
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(targets(f, g, seed++).target.data());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.vertex_count()));
}
BENCHMARK(BM_TiedTargets)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_RowStatistics(benchmark::State& state) {
  const auto L = static_cast<std::size_t>(state.range(0));
  const Graph g = build_torus(2, {L, L});
  const auto init = sample_field<RealValue>(g, {law::UniformReal{0.0, 1.0}, ValueMode::real}, 1);
  Simulation<RealValue> sim(g, init, 7);
  const std::vector<JointThreshold> joint = {{0.1, 1}, {0.01, 4}, {0.001, 16}};
  const auto& rep = sim.prepare();
  for (auto _ : state) benchmark::DoNotOptimize(make_row(rep, sim.field(), g, sim.clusters(), joint).mean_gap);
}
BENCHMARK(BM_RowStatistics)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_OracleCycle(benchmark::State& state) {
  const Graph g = build_torus(1, {static_cast<std::size_t>(state.range(0))});
  ExactField f{std::vector<ExactValue>(g.vertex_count(), 1), 0};
  for (auto _ : state) benchmark::DoNotOptimize(oracle::enumerate_outcomes(f, g, 2).outcomes.size());
}
BENCHMARK(BM_OracleCycle)->Arg(6)->Arg(9)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
