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

#include "thermosched/model.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace thermosched {

int Platform::total_cores() const {
  int total = 0;
  for (const Cluster& c : clusters) total += c.core_count;
  return total;
}

std::optional<ThermalParams> Platform::thermal() const {
  if (!thermal_b || !thermal_g || !ambient_celsius) return std::nullopt;
  return ThermalParams{*thermal_b, *thermal_g, *ambient_celsius};
}

std::vector<std::string> validate_instance(const Instance& instance) {
  std::vector<std::string> out;
  const Platform& p = instance.platform;
  const int m = p.cluster_count();
  if (m == 0) out.emplace_back("platform has no clusters");
  for (int k = 0; k < m; ++k) {
    const Cluster& c = p.clusters[static_cast<std::size_t>(k)];
    if (c.id != k + 1) {
      std::ostringstream os;
      os << "cluster at position " << k + 1 << " has id " << c.id
         << "; ids must be contiguous from 1";
      out.push_back(os.str());
    }
    if (c.core_count < 1) {
      std::ostringstream os;
      os << "cluster " << c.id << " has core_count " << c.core_count
         << "; must be at least 1";
      out.push_back(os.str());
    }
  }
  if (p.idle_power_watts < 0.0) out.emplace_back("idle_power_watts is negative");
  const int thermal_fields = static_cast<int>(p.thermal_b.has_value()) +
                             static_cast<int>(p.thermal_g.has_value()) +
                             static_cast<int>(p.ambient_celsius.has_value());
  if (thermal_fields != 0 && thermal_fields != 3) {
    out.emplace_back(
        "thermal_b, thermal_g and ambient_celsius must be given together");
  }
  if (p.thermal_b && *p.thermal_b <= 0.0) out.emplace_back("thermal_b must be positive");
  if (p.thermal_g && *p.thermal_g <= 0.0) out.emplace_back("thermal_g must be positive");

  const int n = instance.task_count();
  std::set<int> ids;
  for (const Task& t : instance.tasks) {
    if (!ids.insert(t.id).second) {
      out.push_back("duplicate task id " + std::to_string(t.id));
    }
    if (static_cast<int>(t.per_cluster.size()) != m) {
      std::ostringstream os;
      os << "task " << t.id << " has " << t.per_cluster.size()
         << " cluster entries; platform has " << m;
      out.push_back(os.str());
      continue;
    }
    for (int k = 0; k < m; ++k) {
      const TaskOnCluster& tc = t.per_cluster[static_cast<std::size_t>(k)];
      if (tc.exec_time_ms < 1) {
        std::ostringstream os;
        os << "task " << t.id << " has exec_time_ms " << tc.exec_time_ms
           << " on cluster " << k + 1 << "; must be at least 1";
        out.push_back(os.str());
      }
      if (tc.energy_cost && *tc.energy_cost < 0.0) {
        std::ostringstream os;
        os << "task " << t.id << " has negative energy_cost on cluster "
           << k + 1;
        out.push_back(os.str());
      }
    }
  }

  if (instance.major_frame_ms < 1) {
    out.emplace_back("major_frame_ms must be positive");
  }
  const int total_cores = p.total_cores();
  if (instance.max_windows < 1) {
    out.emplace_back("max_windows must be positive");
  } else if (n > 0) {
    const int min_windows = total_cores > 0 ? (n + total_cores - 1) / total_cores : n;
    if (instance.max_windows > n || instance.max_windows < min_windows) {
      std::ostringstream os;
      os << "max_windows " << instance.max_windows << " outside window bound ["
         << min_windows << ", " << n << "]";
      out.push_back(os.str());
    }
  }

  // Every task must fit the frame on at least one cluster.
  if (instance.major_frame_ms >= 1) {
    for (const Task& t : instance.tasks) {
      if (static_cast<int>(t.per_cluster.size()) != m || m == 0) continue;
      Millis shortest = t.per_cluster.front().exec_time_ms;
      for (const TaskOnCluster& tc : t.per_cluster) {
        shortest = std::min(shortest, tc.exec_time_ms);
      }
      if (shortest > instance.major_frame_ms) {
        std::ostringstream os;
        os << "task " << t.id << " needs at least " << shortest
           << " ms but major_frame_ms is " << instance.major_frame_ms;
        out.push_back(os.str());
      }
    }
  }
  return out;
}

const char* to_string(Constraint c) {
  switch (c) {
    case Constraint::kAllAssigned: return "all_assigned";
    case Constraint::kClusterCapacity: return "cluster_capacity";
    case Constraint::kWindowLength: return "window_length";
    case Constraint::kFrameBudget: return "frame_budget";
  }
  return "unknown";
}

bool FeasibilityReport::violates(Constraint c) const {
  return std::any_of(violations.begin(), violations.end(),
                     [c](const Violation& v) { return v.constraint == c; });
}

void require_structure(const Instance& instance,
                       const std::vector<Placement>& placements) {
  if (static_cast<int>(placements.size()) != instance.task_count()) {
    std::ostringstream os;
    os << "assignment covers " << placements.size() << " tasks; instance has "
       << instance.task_count();
    throw InputError(os.str());
  }
  for (std::size_t t = 0; t < placements.size(); ++t) {
    const Placement& p = placements[t];
    if (p.window < 0 || p.window >= instance.max_windows || p.cluster < 0 ||
        p.cluster >= instance.cluster_count()) {
      std::ostringstream os;
      os << "task " << instance.tasks[t].id << " placed at window "
         << p.window + 1 << ", cluster " << p.cluster + 1
         << " outside the instance's ranges";
      throw InputError(os.str());
    }
  }
}

std::vector<Millis> derive_window_lengths(
    const Instance& instance, const std::vector<Placement>& placements) {
  require_structure(instance, placements);
  std::vector<Millis> lengths(static_cast<std::size_t>(instance.max_windows), 0);
  for (std::size_t t = 0; t < placements.size(); ++t) {
    const Placement& p = placements[t];
    Millis& l = lengths[static_cast<std::size_t>(p.window)];
    l = std::max(l, instance.on(static_cast<int>(t), p.cluster).exec_time_ms);
  }
  return lengths;
}

Assignment make_assignment(const Instance& instance,
                           std::vector<Placement> placements) {
  Assignment a;
  a.window_lengths_ms = derive_window_lengths(instance, placements);
  a.placements = std::move(placements);
  return a;
}

FeasibilityReport check_feasible(const Instance& instance,
                                 const Assignment& assignment) {
  require_structure(instance, assignment.placements);
  if (static_cast<int>(assignment.window_lengths_ms.size()) !=
      instance.max_windows) {
    std::ostringstream os;
    os << "assignment has " << assignment.window_lengths_ms.size()
       << " window lengths; instance has " << instance.max_windows
       << " windows";
    throw InputError(os.str());
  }

  FeasibilityReport report;
  auto add = [&report](Constraint c, std::string msg) {
    report.feasible = false;
    report.violations.push_back({c, std::move(msg)});
  };

  const int q = instance.max_windows;
  const int m = instance.cluster_count();
  std::vector<int> count(static_cast<std::size_t>(q * m), 0);
  for (std::size_t t = 0; t < assignment.placements.size(); ++t) {
    const Placement& p = assignment.placements[t];
    ++count[static_cast<std::size_t>(p.window * m + p.cluster)];
    const Millis e = instance.on(static_cast<int>(t), p.cluster).exec_time_ms;
    const Millis l = assignment.window_lengths_ms[static_cast<std::size_t>(p.window)];
    if (e > l) {
      std::ostringstream os;
      os << "task " << instance.tasks[t].id << " needs " << e
         << " ms but window " << p.window + 1 << " is " << l << " ms long";
      add(Constraint::kWindowLength, os.str());
    }
  }
  for (int j = 0; j < q; ++j) {
    for (int k = 0; k < m; ++k) {
      const int c = count[static_cast<std::size_t>(j * m + k)];
      if (c > instance.cores(k)) {
        std::ostringstream os;
        os << "window " << j + 1 << " holds " << c << " tasks on cluster "
           << k + 1 << " with " << instance.cores(k) << " cores";
        add(Constraint::kClusterCapacity, os.str());
      }
    }
  }
  Millis total = 0;
  for (Millis l : assignment.window_lengths_ms) {
    if (l < 0) add(Constraint::kWindowLength, "negative window length");
    total += l;
  }
  if (total > instance.major_frame_ms) {
    std::ostringstream os;
    os << "windows total " << total << " ms, exceeding the major frame of "
       << instance.major_frame_ms << " ms";
    add(Constraint::kFrameBudget, os.str());
  }
  return report;
}

CoreSchedule derive_core_schedule(const Instance& instance,
                                  const Assignment& assignment) {
  const FeasibilityReport report = check_feasible(instance, assignment);
  if (!report.feasible) {
    throw InputError("cannot derive a core schedule: " +
                     report.violations.front().message);
  }
  const int q = instance.max_windows;
  const int m = instance.cluster_count();
  CoreSchedule s;
  s.slots.resize(static_cast<std::size_t>(q));
  for (auto& w : s.slots) {
    w.resize(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
      w[static_cast<std::size_t>(k)].assign(
          static_cast<std::size_t>(instance.cores(k)), std::nullopt);
    }
  }

  std::vector<int> order(assignment.placements.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    return instance.tasks[static_cast<std::size_t>(x)].id <
           instance.tasks[static_cast<std::size_t>(y)].id;
  });
  std::vector<int> next(static_cast<std::size_t>(q * m), 0);
  for (int t : order) {
    const Placement& p = assignment.placements[static_cast<std::size_t>(t)];
    int& r = next[static_cast<std::size_t>(p.window * m + p.cluster)];
    s.slots[static_cast<std::size_t>(p.window)][static_cast<std::size_t>(p.cluster)]
           [static_cast<std::size_t>(r)] = t;
    ++r;
  }
  return s;
}

Millis total_processing_time(const Instance& instance,
                             const std::vector<Placement>& placements) {
  require_structure(instance, placements);
  Millis total = 0;
  for (std::size_t t = 0; t < placements.size(); ++t) {
    total += instance.on(static_cast<int>(t), placements[t].cluster).exec_time_ms;
  }
  return total;
}

Millis total_idle_time(const Instance& instance, const Assignment& assignment) {
  return instance.major_frame_ms * instance.platform.total_cores() -
         total_processing_time(instance, assignment.placements);
}

}  // namespace thermosched
