#include <dclust/run.hpp>
#include <dclust/stats.hpp>

#include <cmath>

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace dclust {
namespace {

using testing::cycle;
using testing::exact;

RunResult<ExactValue> cycle5_run() {
  RunOptions<ExactValue> o;
  o.joint = {{0.5, 1}, {10.0, 1}, {10.0, 4}};
  return run(cycle(5), exact({1, 3, 2, 0, 0}), o);
}

TEST(Stats, ActivityCountsMovers) {
  const Graph g = cycle(5);
  Simulation<ExactValue> sim(g, exact({1, 3, 2, 0, 0}), 0);
  // a = (1,1,1,3,4): only 0 and 2 leave their vertex
  EXPECT_DOUBLE_EQ(activity(sim.prepare()), 0.4);
  sim.commit();
  EXPECT_EQ(activity(sim.prepare()), 0.0);
}

TEST(Stats, InDegrees) {
  TargetMap tm{{1, 1, 1, 3, 4}, {1, 1, 1, 1, 1}};
  EXPECT_EQ(in_degrees(tm), (std::vector<std::size_t>{0, 3, 0, 1, 1}));
  EXPECT_EQ(in_degree_total(tm), 5u);
}

TEST(Stats, Gaps) {
  const Graph g = cycle(5);
  EXPECT_EQ(gaps(exact({1, 3, 2, 0, 0}), g), (std::vector<ExactValue>{2, 0, 1, 0, 0}));
  const auto s = gap_stats(exact({1, 3, 2, 0, 0}), g);
  EXPECT_EQ(s.max_gap, 2u);
  EXPECT_DOUBLE_EQ(s.mean_gap, 1.0);
  EXPECT_EQ(s.active_count, 3u);

  const auto absorbed = gap_stats(exact({0, 6, 0, 0, 0}), g);
  EXPECT_EQ(absorbed.max_gap, 0u);
  EXPECT_EQ(absorbed.mean_gap, 0.0);
  const auto zero = gap_stats(exact({0, 0, 0, 0, 0}), g);
  EXPECT_EQ(zero.active_count, 0u);
  EXPECT_EQ(zero.max_gap, 0u);
  EXPECT_EQ(zero.mean_gap, 0.0);
}

TEST(Stats, InfiniteGapIsZeroNextToInfinity) {
  const ExactValue inf = ResourceTraits<ExactValue>::infinite();
  const auto gs = gaps(exact({inf, inf, 0}), cycle(3));
  EXPECT_EQ(gs[0], 0u);
  EXPECT_EQ(gs[1], 0u);
}

TEST(Stats, HistogramAndMoments) {
  ClusterState c(5);
  EXPECT_EQ(cluster_histogram(c), (std::map<std::size_t, std::size_t>{{1, 5}}));
  EXPECT_EQ(cluster_moment(c, 2.0), 1.0);
  c.advance(std::vector<VertexId>{1, 1, 1, 3, 4}, cycle(5), 0);
  const auto h = cluster_histogram(c);
  EXPECT_EQ(h, (std::map<std::size_t, std::size_t>{{1, 2}, {3, 1}}));
  std::size_t covered = 0;
  for (auto [s, n] : h) covered += s * n;
  EXPECT_EQ(covered, 5u);
  EXPECT_EQ(max_cluster(c), 3u);
  EXPECT_DOUBLE_EQ(cluster_moment(c, 2.0), 2.2);
  EXPECT_EQ(cluster_moment(c, 1.0), 1.0);
  EXPECT_THROW(cluster_moment(c, 0.5), std::invalid_argument);
}

TEST(Stats, JointGapFraction) {
  ClusterState c(5);
  const std::vector<ExactValue> gs{2, 0, 1, 0, 0};
  EXPECT_DOUBLE_EQ(joint_gap_fraction<ExactValue>(gs, c, 1.5, 1), 0.2);
  EXPECT_DOUBLE_EQ(joint_gap_fraction<ExactValue>(gs, c, 10.0, 1), 0.4);
  EXPECT_DOUBLE_EQ(joint_gap_fraction<ExactValue>(gs, c, 1.0, 1), 0.0);
  c.advance(std::vector<VertexId>{0, 1, 1, 3, 4}, cycle(5), 0);
  // vertex 2 now empty: size 0 <= k still counts
  EXPECT_DOUBLE_EQ(joint_gap_fraction<ExactValue>(gs, c, 10.0, 1), 0.4);
  EXPECT_DOUBLE_EQ(joint_gap_fraction<ExactValue>(std::vector<ExactValue>{0, 5, 0, 0, 0}, c, 10.0, 1), 0.0);
  EXPECT_DOUBLE_EQ(joint_gap_fraction<ExactValue>(std::vector<ExactValue>{0, 5, 0, 0, 0}, c, 10.0, 2), 0.2);
}

TEST(Stats, CycleFiveRun) {
  const auto r = cycle5_run();
  EXPECT_TRUE(r.absorbed);
  EXPECT_EQ(r.absorption_step, 1u);
  EXPECT_EQ(r.steps_executed, 1u);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.final_field.values, (std::vector<ExactValue>{0, 6, 0, 0, 0}));
  const auto& row0 = r.rows[0];
  EXPECT_EQ(row0.step, 0u);
  EXPECT_DOUBLE_EQ(row0.activity, 0.4);
  EXPECT_EQ(row0.counts, (std::array<std::size_t, 5>{2, 0, 0, 1, 2}));
  EXPECT_EQ(row0.max_gap, 2u);
  EXPECT_EQ(row0.active_count, 3u);
  EXPECT_EQ(row0.total_mass, 6u);
  EXPECT_EQ(row0.joint, (std::vector<double>{0.0, 0.4, 0.4}));
  const auto& row1 = r.rows[1];
  EXPECT_EQ(row1.activity, 0.0);
  EXPECT_EQ(row1.max_cluster, 3u);
  EXPECT_DOUBLE_EQ(row1.moment_alpha2, 2.2);
  EXPECT_EQ(r.last_move, (std::vector<std::optional<std::uint64_t>>{0, std::nullopt, 0, std::nullopt, std::nullopt}));
  EXPECT_EQ(moving_mass_fraction(r, 0).origin_fraction, 0.0);
  EXPECT_FALSE(moving_mass_fraction(r, 0).lower_bound);
  const auto types = vertex_type(r);
  EXPECT_EQ(types, (std::vector<VertexType>{VertexType::A, VertexType::B, VertexType::A, VertexType::A, VertexType::A}));
}

TEST(Stats, AllZeroRunIsAllA) {
  const auto r = run(cycle(4), exact({0, 0, 0, 0}), RunOptions<ExactValue>{});
  EXPECT_TRUE(r.absorbed);
  EXPECT_EQ(r.absorption_step, 0u);
  for (auto t : vertex_type(r)) EXPECT_EQ(t, VertexType::A);
}

TEST(Stats, AbsorbedStartHasNoMovers) {
  const auto r = run(cycle(4), exact({1, 0, 3, 0}), RunOptions<ExactValue>{});
  EXPECT_EQ(r.absorption_step, 0u);
  EXPECT_EQ(r.steps_executed, 0u);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0].activity, 0.0);
}

TEST(Stats, WindowedTypingOnPersistentTies) {
  // Two-vertex-length torus: (1,1) always ties; force a non-absorbed stop.
  RunOptions<ExactValue> o;
  o.max_steps = 6;
  o.type_window = 4;
  const auto r = run(build_torus(1, {2}), exact({1, 1}), o);
  if (!r.absorbed) {
    EXPECT_TRUE(moving_mass_fraction(r, 0).lower_bound);
    for (auto t : vertex_type(r)) EXPECT_EQ(t, VertexType::undetermined);
  }
  // Zero vertices of a non-absorbed run are A throughout the window.
  RunOptions<ExactValue> o2;
  o2.max_steps = 0;
  o2.type_window = 1;
  const auto r2 = run(cycle(4), exact({2, 2, 0, 0}), o2);
  ASSERT_FALSE(r2.absorbed);
  const auto types = vertex_type(r2);
  EXPECT_EQ(types[3], VertexType::A);
}

TEST(Stats, CycleThreeAbsorptionTimeMoments) {
  // Each step from (2,2,0) absorbs with probability 1/2: T ~ Geometric(1/2)
  // on {1,2,...}, mean 2, variance 2.
  const int runs = 20000;
  double sum = 0, sq = 0;
  for (int s = 0; s < runs; ++s) {
    RunOptions<ExactValue> o;
    o.seed = static_cast<std::uint64_t>(s);
    const auto r = run(cycle(3), exact({2, 2, 0}), o);
    ASSERT_TRUE(r.absorbed);
    const double t = static_cast<double>(*r.absorption_step);
    sum += t;
    sq += t * t;
  }
  const double mean = sum / runs;
  const double var = sq / runs - mean * mean;
  EXPECT_TRUE(testing::within_3sigma(mean, 2.0, std::sqrt(2.0), runs)) << mean;
  EXPECT_NEAR(var, 2.0, 0.15);
}

TEST(Stats, CycleThreeMovingFraction) {
  // E[origin fraction still moving after n] = (2/9)(1/2)^n
  const int runs = 20000;
  std::vector<double> acc(5, 0.0), acc_sq(5, 0.0);
  for (int s = 0; s < runs; ++s) {
    RunOptions<ExactValue> o;
    o.seed = static_cast<std::uint64_t>(s) + 1000000;
    const auto r = run(cycle(3), exact({2, 2, 0}), o);
    for (std::size_t n = 0; n < acc.size(); ++n) {
      const double f = moving_mass_fraction(r, n).origin_fraction;
      acc[n] += f;
      acc_sq[n] += f * f;
    }
  }
  for (std::size_t n = 0; n < acc.size(); ++n) {
    const double mean = acc[n] / runs;
    const double sd = std::sqrt(std::max(acc_sq[n] / runs - mean * mean, 1e-12));
    const double want = (2.0 / 9.0) * std::pow(0.5, static_cast<double>(n));
    EXPECT_TRUE(testing::within_3sigma(mean, want, sd, runs)) << "n=" << n << " mean=" << mean;
  }
}

TEST(Stats, ConstantFieldActivity) {
  // Constant positive field on a 2-D torus: a vertex stays with probability 1/5.
  const Graph g = build_torus(2, {16, 16});
  ExactField f{std::vector<ExactValue>(g.vertex_count(), 1), 0};
  const int seeds = 200;
  double sum = 0;
  for (int s = 0; s < seeds; ++s) {
    Simulation<ExactValue> sim(g, f, static_cast<std::uint64_t>(s));
    sum += activity(sim.prepare());
  }
  const double n = double(seeds) * g.vertex_count();
  EXPECT_TRUE(testing::within_3sigma(sum / seeds, 0.8, 0.4, n));
}

TEST(Stats, AuditFlagsBrokenConservation) {
  const Graph g = cycle(5);
  Simulation<ExactValue> sim(g, exact({1, 3, 2, 0, 0}), 0);
  const auto& rep = sim.prepare();
  InvariantAudit<ExactValue> audit;
  audit.observe({g, sim.field(), sim.next_values(), rep, sim.clusters(), false});
  EXPECT_TRUE(audit.clean());
  std::vector<ExactValue> bad{0, 5, 0, 0, 0};
  audit.observe({g, sim.field(), bad, rep, sim.clusters(), false});
  EXPECT_FALSE(audit.clean());
  EXPECT_TRUE(audit.violations().count("mass_conservation"));
  EXPECT_EQ(audit.steps_checked(), 2u);
}

}  // namespace
}  // namespace dclust
