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

#include "thermosched/greedy.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

namespace thermosched {

namespace {

double task_energy(const Instance& instance, int task, int cluster) {
  const TaskOnCluster& tc = instance.on(task, cluster);
  return tc.activity_coef * static_cast<double>(tc.exec_time_ms);
}

double summed_energy(const Instance& instance, const Assignment& assignment) {
  double total = 0.0;
  for (std::size_t t = 0; t < assignment.placements.size(); ++t) {
    total += task_energy(instance, static_cast<int>(t), assignment.placements[t].cluster);
  }
  return total;
}

}  // namespace

SearchResult greedy(const Instance& instance, std::int64_t time_limit_ms) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const auto deadline = start + std::chrono::milliseconds(time_limit_ms);
  const int n = instance.task_count();
  const int m = instance.cluster_count();
  const ObjectiveSpec feasibility{ObjectiveKind::kFeasibilityOnly, std::nullopt};

  SearchResult out;
  auto finish = [&](SearchStatus status) {
    out.status = status;
    if (out.assignment) out.objective_value = summed_energy(instance, *out.assignment);
    out.lower_bound = out.objective_value;
    out.elapsed_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return out;
  };
  auto remaining = [&]() -> std::int64_t {
    const auto left =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
    return std::max<std::int64_t>(1, left);
  };

  PartialFix fix = PartialFix::none(n);
  SearchResult probe = solve(instance, feasibility, fix, remaining());
  out.nodes_explored += probe.nodes_explored;
  if (probe.status == SearchStatus::kInfeasible) return finish(SearchStatus::kInfeasible);
  if (!probe.has_solution()) return finish(SearchStatus::kUnknownTimeout);
  out.assignment = probe.assignment;

  std::vector<double> largest(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < m; ++k) {
      largest[static_cast<std::size_t>(i)] =
          std::max(largest[static_cast<std::size_t>(i)], task_energy(instance, i, k));
    }
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return largest[static_cast<std::size_t>(x)] > largest[static_cast<std::size_t>(y)];
  });

  for (int i : order) {
    std::vector<int> clusters(static_cast<std::size_t>(m));
    std::iota(clusters.begin(), clusters.end(), 0);
    std::stable_sort(clusters.begin(), clusters.end(), [&](int x, int y) {
      return task_energy(instance, i, x) < task_energy(instance, i, y);
    });
    bool committed = false;
    for (int k : clusters) {
      if (Clock::now() >= deadline) return finish(SearchStatus::kFeasibleTimeout);
      fix.cluster[static_cast<std::size_t>(i)] = k;
      probe = solve(instance, feasibility, fix, remaining());
      out.nodes_explored += probe.nodes_explored;
      if (probe.has_solution()) {
        out.assignment = probe.assignment;
        committed = true;
        break;
      }
      if (probe.status == SearchStatus::kUnknownTimeout) {
        fix.cluster[static_cast<std::size_t>(i)].reset();
        return finish(SearchStatus::kFeasibleTimeout);
      }
    }
    if (!committed) {
      fix.cluster[static_cast<std::size_t>(i)] =
          out.assignment->placements[static_cast<std::size_t>(i)].cluster;
    }
  }
  return finish(SearchStatus::kFeasible);
}

}  // namespace thermosched
