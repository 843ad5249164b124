// Copyright 2026 The thermosched Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "thermosched/exact_search.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "support/random_instances.hpp"

namespace thermosched {
namespace {

constexpr std::int64_t kLongTime = 600'000;

ObjectiveSpec spec(ObjectiveKind kind, std::optional<RegressionCoefficients> c = {}) {
  return ObjectiveSpec{kind, std::move(c)};
}

Instance single_window_pair() {
  Instance inst;
  inst.platform.clusters = {Cluster{1, 1, "", 0}, Cluster{2, 1, "", 0}};
  inst.tasks = {Task{1, "", {{10, 0.5, 0.1, {}}, {5, 0.5, 0.1, {}}}},
                Task{2, "", {{10, 0.5, 0.1, {}}, {5, 0.5, 0.1, {}}}}};
  inst.major_frame_ms = 10;
  inst.max_windows = 1;
  return inst;
}

TEST(Solve, IdleMinFillsBothClustersInSingleWindow) {
  const Instance inst = single_window_pair();
  const SearchResult r = solve(inst, spec(ObjectiveKind::kIdleMin), PartialFix::none(2), kLongTime);
  ASSERT_EQ(r.status, SearchStatus::kOptimal);
  EXPECT_NE(r.assignment->placements[0].cluster, r.assignment->placements[1].cluster);
  EXPECT_DOUBLE_EQ(r.objective_value, 20.0 - 15.0);
}

TEST(Solve, PigeonholeIsInfeasible) {
  Instance inst;
  inst.platform.clusters = {Cluster{1, 1, "", 0}};
  inst.tasks = {Task{1, "", {{5, 0.1, 0.1, {}}}}, Task{2, "", {{5, 0.1, 0.1, {}}}}};
  inst.major_frame_ms = 5;
  inst.max_windows = 2;
  for (auto kind : {ObjectiveKind::kSmPower, ObjectiveKind::kFeasibilityOnly}) {
    EXPECT_EQ(solve(inst, spec(kind), PartialFix::none(2), kLongTime).status,
              SearchStatus::kInfeasible);
    EXPECT_EQ(brute_force_optimum(inst, spec(kind), PartialFix::none(2)).status,
              SearchStatus::kInfeasible);
  }
}

TEST(Solve, FeasibilityOnlyReturnsFeasibleAssignment) {
  const Instance inst = testing::seven_task_schedule_instance();
  const SearchResult r =
      solve(inst, spec(ObjectiveKind::kFeasibilityOnly), PartialFix::none(7), kLongTime);
  ASSERT_EQ(r.status, SearchStatus::kOptimal);
  EXPECT_TRUE(check_feasible(inst, *r.assignment).feasible);
}

TEST(Solve, SingleTaskSmMatchesSchedulePower) {
  Instance inst;
  inst.platform.idle_power_watts = 1.0;
  inst.platform.clusters = {Cluster{1, 1, "", 0}};
  inst.tasks = {Task{1, "", {{40, 0.5, 0.2, {}}}}};
  inst.major_frame_ms = 100;
  inst.max_windows = 1;
  const SearchResult r = brute_force_optimum(inst, spec(ObjectiveKind::kSmPower), PartialFix::none(1));
  ASSERT_EQ(r.status, SearchStatus::kOptimal);
  EXPECT_NEAR(r.objective_value, 1.0 + (0.5 * 40 + 0.2 * 40) / 100.0, 1e-12);
}

TEST(Solve, RejectsInvalidPartialFixAndMissingCoefficients) {
  const Instance inst = single_window_pair();
  PartialFix fix = PartialFix::none(2);
  fix.cluster[0] = 2;
  EXPECT_THROW(solve(inst, spec(ObjectiveKind::kSmPower), fix, 1000), InputError);
  EXPECT_THROW(solve(inst, spec(ObjectiveKind::kSmPower), PartialFix::none(3), 1000), InputError);
  EXPECT_THROW(solve(inst, spec(ObjectiveKind::kLrUbPower), PartialFix::none(2), 1000), InputError);
  EXPECT_THROW(solve(inst, spec(ObjectiveKind::kSmPower), PartialFix::none(2), 0), InputError);
}

TEST(Solve, RespectsPartialFix) {
  const Instance inst = testing::seven_task_schedule_instance();
  PartialFix fix = PartialFix::none(7);
  fix.cluster[0] = 0;
  fix.cluster[4] = 1;
  const SearchResult r = solve(inst, spec(ObjectiveKind::kSmPower), fix, kLongTime);
  ASSERT_TRUE(r.has_solution());
  EXPECT_EQ(r.assignment->placements[0].cluster, 0);
  EXPECT_EQ(r.assignment->placements[4].cluster, 1);
}

TEST(BruteForce, GuardsAgainstLargeInstances) {
  std::mt19937_64 rng(1);
  testing::RandomSpec big;
  big.min_tasks = big.max_tasks = 11;
  big.max_cores = 4;
  const Instance inst = testing::random_instance(rng, big);
  EXPECT_THROW(brute_force_optimum(inst, spec(ObjectiveKind::kSmPower), PartialFix::none(11)),
               InputError);
}

class OracleAgreement : public ::testing::TestWithParam<ObjectiveKind> {};

TEST_P(OracleAgreement, MatchesBruteForceOnRandomInstances) {
  std::mt19937_64 rng(100 + static_cast<int>(GetParam()));
  testing::RandomSpec s;
  s.max_tasks = 7;
  s.signed_offsets = true;
  for (int trial = 0; trial < 25; ++trial) {
    const Instance inst = testing::random_instance(rng, s);
    ObjectiveSpec obj = spec(GetParam());
    if (GetParam() == ObjectiveKind::kLrUbPower) {
      RegressionCoefficients c = testing::positive_coefficients(rng, inst.cluster_count());
      c.beta[0][1] = -0.3;
      obj.coefficients = c;
    }
    const auto fix = PartialFix::none(inst.task_count());
    const SearchResult bb = solve(inst, obj, fix, kLongTime);
    const SearchResult oracle = brute_force_optimum(inst, obj, fix);
    ASSERT_EQ(bb.status == SearchStatus::kInfeasible, oracle.status == SearchStatus::kInfeasible)
        << "trial " << trial;
    if (oracle.status == SearchStatus::kInfeasible) continue;
    ASSERT_EQ(bb.status, SearchStatus::kOptimal);
    EXPECT_NEAR(bb.objective_value, oracle.objective_value, 1e-9) << "trial " << trial;
    EXPECT_NEAR(bb.objective_value, bb.lower_bound, 1e-9);
    EXPECT_TRUE(check_feasible(inst, *bb.assignment).feasible);
    EXPECT_NEAR(objective_value(inst, *bb.assignment, obj), bb.objective_value, 1e-9);
  }
}

INSTANTIATE_TEST_SUITE_P(AllObjectives, OracleAgreement,
                         ::testing::Values(ObjectiveKind::kSmPower, ObjectiveKind::kLrUbPower,
                                           ObjectiveKind::kIdleMin, ObjectiveKind::kIdleMax));

TEST_P(OracleAgreement, MatchesBruteForceUnderPartialFixes) {
  std::mt19937_64 rng(200 + static_cast<int>(GetParam()));
  testing::RandomSpec s;
  s.max_tasks = 7;
  s.max_windows = 5;
  s.max_cores = 3;
  std::bernoulli_distribution fixed(0.4);
  for (int trial = 0; trial < 40; ++trial) {
    const Instance inst = testing::random_instance(rng, s);
    ObjectiveSpec obj = spec(GetParam());
    if (GetParam() == ObjectiveKind::kLrUbPower) {
      obj.coefficients = testing::positive_coefficients(rng, inst.cluster_count());
    }
    PartialFix fix = PartialFix::none(inst.task_count());
    for (auto& c : fix.cluster) {
      if (fixed(rng)) c = std::uniform_int_distribution<int>(0, inst.cluster_count() - 1)(rng);
    }
    const SearchResult bb = solve(inst, obj, fix, kLongTime);
    const SearchResult oracle = brute_force_optimum(inst, obj, fix);
    ASSERT_EQ(bb.has_solution(), oracle.has_solution()) << "trial " << trial;
    if (!oracle.has_solution()) continue;
    EXPECT_NEAR(bb.objective_value, oracle.objective_value, 1e-9) << "trial " << trial;
    EXPECT_TRUE(check_feasible(inst, *bb.assignment).feasible);
    for (std::size_t t = 0; t < fix.cluster.size(); ++t) {
      if (fix.cluster[t]) EXPECT_EQ(bb.assignment->placements[t].cluster, *fix.cluster[t]);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(FeasibilityOracle, OracleAgreement,
                         ::testing::Values(ObjectiveKind::kFeasibilityOnly));

TEST(Solve, SmObjectiveEqualsSchedulePower) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Instance inst = testing::random_instance(rng);
    const SearchResult r =
        solve(inst, spec(ObjectiveKind::kSmPower), PartialFix::none(inst.task_count()), kLongTime);
    if (!r.has_solution()) continue;
    EXPECT_NEAR(r.objective_value, schedule_power(inst, *r.assignment, PowerModel::kSM).watts,
                1e-9);
  }
}

TEST(Solve, ObjectiveInvariantUnderWindowPermutation) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const Instance inst = testing::random_instance(rng);
    const SearchResult r =
        solve(inst, spec(ObjectiveKind::kSmPower), PartialFix::none(inst.task_count()), kLongTime);
    if (!r.has_solution()) continue;
    std::vector<int> perm(static_cast<std::size_t>(inst.max_windows));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Assignment p = *r.assignment;
    for (auto& pl : p.placements) pl.window = perm[static_cast<std::size_t>(pl.window)];
    for (int j = 0; j < inst.max_windows; ++j) {
      p.window_lengths_ms[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])] =
          r.assignment->window_lengths_ms[static_cast<std::size_t>(j)];
    }
    EXPECT_NEAR(objective_value(inst, p, spec(ObjectiveKind::kSmPower)), r.objective_value, 1e-9);
  }
}

TEST(Solve, FeasibilityIsMonotoneInPartialFix) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 40; ++trial) {
    const Instance inst = testing::random_instance(rng);
    const int n = inst.task_count();
    PartialFix fix = PartialFix::none(n);
    for (int i = 0; i < n; ++i) {
      if (rng() % 2) fix.cluster[static_cast<std::size_t>(i)] = static_cast<int>(rng() % 2);
    }
    const auto feas = spec(ObjectiveKind::kFeasibilityOnly);
    if (!solve(inst, feas, fix, kLongTime).has_solution()) continue;
    PartialFix subset = fix;
    for (auto& c : subset.cluster) {
      if (rng() % 2) c.reset();
    }
    EXPECT_TRUE(solve(inst, feas, subset, kLongTime).has_solution());
  }
}

TEST(Solve, TimeoutKeepsValidBound) {
  std::mt19937_64 rng(11);
  testing::RandomSpec s;
  s.min_tasks = s.max_tasks = 30;
  s.max_windows = 30;
  s.max_cores = 3;
  s.min_tightness = s.max_tightness = 0.5;
  const Instance inst = testing::random_instance(rng, s);
  const SearchResult r =
      solve(inst, spec(ObjectiveKind::kSmPower), PartialFix::none(inst.task_count()), 200);
  EXPECT_TRUE(r.status == SearchStatus::kFeasibleTimeout ||
              r.status == SearchStatus::kUnknownTimeout || r.status == SearchStatus::kOptimal);
  EXPECT_LT(r.elapsed_ms, 2000.0);
  if (r.has_solution()) {
    EXPECT_LE(r.lower_bound, r.objective_value + 1e-9);
    EXPECT_TRUE(check_feasible(inst, *r.assignment).feasible);
  }
}

}  // namespace
}  // namespace thermosched
