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

#include "thermosched/flow.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <random>

#include "support/random_instances.hpp"

namespace thermosched {
namespace {

Instance flat(int tasks, std::vector<int> cores, int windows, Millis h) {
  Instance inst;
  for (std::size_t k = 0; k < cores.size(); ++k) {
    inst.platform.clusters.push_back(Cluster{static_cast<int>(k) + 1, cores[k], "", 0});
  }
  for (int i = 0; i < tasks; ++i) {
    Task t{i + 1, "", {}};
    for (std::size_t k = 0; k < cores.size(); ++k) t.per_cluster.push_back({10, 1.0, 0.0, 1.0});
    inst.tasks.push_back(t);
  }
  inst.major_frame_ms = h;
  inst.max_windows = windows;
  return inst;
}

TEST(BuildNetwork, CountsArcsAndBalances) {
  const Instance inst = flat(2, {1, 1}, 1, 10);
  const FlowNetwork net = build_network(inst, {10});
  EXPECT_EQ(net.arcs.size(), 4u + 2u);
  EXPECT_EQ(net.balances, (std::vector<int>{1, 1, 0, 0, -2}));
  int sum = 0;
  for (int b : net.balances) sum += b;
  EXPECT_EQ(sum, 0);
  EXPECT_EQ(net.arcs.back().capacity, 1);
}

TEST(BuildNetwork, TaskTooLongEverywhereHasNoArcs) {
  Instance inst = flat(2, {1, 1}, 1, 20);
  inst.tasks[1].per_cluster = {{15, 1.0, 0.0, {}}, {16, 1.0, 0.0, {}}};
  const FlowNetwork net = build_network(inst, {12});
  EXPECT_EQ(net.unplaceable_tasks, (std::vector<int>{1}));
  for (const FlowArc& a : net.arcs) EXPECT_NE(a.from, 1);
  EXPECT_FALSE(min_cost_assignment(net).feasible);
}

TEST(BuildNetwork, UnitTimesReachEverySecondClusterNode) {
  Instance inst = flat(4, {1, 3}, 2, 40);
  for (auto& t : inst.tasks) t.per_cluster[1].exec_time_ms = 1;
  const FlowNetwork net = build_network(inst, {20, 20});
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 2; ++j) {
      const int target = net.window_cluster_node(j, 1);
      EXPECT_TRUE(std::any_of(net.arcs.begin(), net.arcs.end(), [&](const FlowArc& a) {
        return a.from == i && a.to == target;
      }));
    }
  }
}

TEST(BuildNetwork, RejectsBadLengths) {
  const Instance inst = flat(2, {1, 1}, 2, 20);
  EXPECT_THROW(build_network(inst, {10}), InputError);
  EXPECT_THROW(build_network(inst, {15, 10}), InputError);
  EXPECT_THROW(build_network(inst, {-1, 10}), InputError);
}

TEST(MinCostAssignment, PicksCheaperArc) {
  Instance inst = flat(1, {1, 1}, 1, 10);
  inst.tasks[0].per_cluster[0].energy_cost = 3.0;
  inst.tasks[0].per_cluster[1].energy_cost = 7.0;
  const FlowSolution s = min_cost_assignment(build_network(inst, {10}));
  ASSERT_TRUE(s.feasible);
  EXPECT_EQ(s.assignment->placements[0].cluster, 0);
  EXPECT_DOUBLE_EQ(s.total_cost, 3.0);
}

TEST(MinCostAssignment, SaturatesCapacity) {
  const Instance inst = flat(3, {2, 1}, 1, 10);
  const FlowSolution s = min_cost_assignment(build_network(inst, {10}));
  ASSERT_TRUE(s.feasible);
  EXPECT_DOUBLE_EQ(s.total_cost, 3.0);
  EXPECT_TRUE(check_feasible(inst, *s.assignment).feasible);
  const FlowSolution over = min_cost_assignment(build_network(flat(4, {2, 1}, 1, 10), {10}));
  EXPECT_FALSE(over.feasible);
  EXPECT_EQ(over.flow_value, 3);
}

TEST(MinCostAssignment, DefaultCostIsActivityTimesExec) {
  Instance inst = flat(1, {1, 1}, 1, 10);
  inst.tasks[0].per_cluster = {{10, 0.5, 0.0, {}}, {4, 2.0, 0.0, {}}};
  EXPECT_DOUBLE_EQ(energy_cost(inst, 0, 0), 5.0);
  EXPECT_DOUBLE_EQ(energy_cost(inst, 0, 1), 8.0);
  EXPECT_DOUBLE_EQ(min_cost_assignment(build_network(inst, {10})).total_cost, 5.0);
}

std::vector<Millis> random_lengths(const Instance& inst, std::mt19937_64& rng) {
  std::vector<Millis> l(static_cast<std::size_t>(inst.max_windows));
  Millis budget = inst.major_frame_ms;
  for (auto& x : l) {
    x = std::uniform_int_distribution<Millis>(0, budget / 2 + 1)(rng);
    x = std::min(x, budget);
    budget -= x;
  }
  return l;
}

TEST(MinCostAssignment, AgreesWithEnumerationAndIsIntegral) {
  std::mt19937_64 rng(21);
  testing::RandomSpec s;
  s.max_tasks = 6;
  int feasible = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const Instance inst = testing::random_instance(rng, s);
    const auto witness = testing::random_feasible_assignment(inst, rng);
    const auto lengths =
        trial % 2 == 0 && witness ? witness->window_lengths_ms : random_lengths(inst, rng);
    const FlowSolution sol = min_cost_assignment(build_network(inst, lengths));
    const auto oracle = testing::brute_force_min_energy(inst, lengths);
    ASSERT_EQ(sol.feasible, oracle.has_value()) << "trial " << trial;
    for (int f : sol.arc_flow) EXPECT_TRUE(f >= 0);
    if (!oracle) continue;
    ++feasible;
    EXPECT_NEAR(sol.total_cost, *oracle, 1e-9);
    EXPECT_TRUE(check_feasible(inst, *sol.assignment).feasible);
    EXPECT_EQ(sol.assignment->window_lengths_ms, lengths);
  }
  EXPECT_GT(feasible, 10);
}

TEST(MinCostAssignment, LargeInstanceIsFast) {
  std::mt19937_64 rng(22);
  testing::RandomSpec s;
  s.min_tasks = s.max_tasks = 60;
  s.max_windows = 30;
  s.max_cores = 4;
  s.min_tightness = s.max_tightness = 2.0;
  Instance inst = testing::random_instance(rng, s);
  inst.max_windows = 30;
  std::vector<Millis> lengths(30, inst.major_frame_ms / 30);
  const auto start = std::chrono::steady_clock::now();
  const FlowSolution sol = min_cost_assignment(build_network(inst, lengths));
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(ms, 1000.0);
  if (sol.feasible) EXPECT_TRUE(check_feasible(inst, *sol.assignment).feasible);
}

}  // namespace
}  // namespace thermosched
