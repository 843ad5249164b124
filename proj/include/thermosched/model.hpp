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

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace thermosched {

// All durations (execution times, window lengths, major frame) are integer
// milliseconds.
using Millis = std::int64_t;

// Raised when inputs are structurally inconsistent (wrong sizes, indices out of
// range, task sets that do not match). Constraint violations of otherwise
// well-formed data are reported as values, not thrown.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Cluster {
  int id = 0;  // 1-based, contiguous within a platform
  int core_count = 1;
  std::string label;
  int frequency_mhz = 0;  // informational

  bool operator==(const Cluster&) const = default;
};

// Steady-state thermal parameters of the single-node model
// T = P / B + (G / B) * T_amb.
struct ThermalParams {
  double b = 1.0;
  double g = 1.0;
  double ambient_celsius = 0.0;
};

struct Platform {
  std::vector<Cluster> clusters;
  double idle_power_watts = 0.0;
  // Either all three are set or none is; validate_instance flags partial sets.
  std::optional<double> thermal_b;
  std::optional<double> thermal_g;
  std::optional<double> ambient_celsius;

  int cluster_count() const { return static_cast<int>(clusters.size()); }
  int total_cores() const;
  // Present only when all three thermal fields are set.
  std::optional<ThermalParams> thermal() const;

  bool operator==(const Platform&) const = default;
};

// Characteristics of one task on one cluster.
struct TaskOnCluster {
  Millis exec_time_ms = 1;
  double activity_coef = 0.0;  // a_ik, watts
  double offset_coef = 0.0;    // b_ik, watts
  std::optional<double> energy_cost;  // d_ik, used by the fixed-window solver

  bool operator==(const TaskOnCluster&) const = default;
};

struct Task {
  int id = 0;  // 1-based
  std::string name;
  std::vector<TaskOnCluster> per_cluster;  // indexed by zero-based cluster

  bool operator==(const Task&) const = default;
};

struct Instance {
  Platform platform;
  std::vector<Task> tasks;
  Millis major_frame_ms = 0;
  int max_windows = 1;

  int task_count() const { return static_cast<int>(tasks.size()); }
  int cluster_count() const { return platform.cluster_count(); }
  const TaskOnCluster& on(int task, int cluster) const {
    return tasks[static_cast<std::size_t>(task)]
        .per_cluster[static_cast<std::size_t>(cluster)];
  }
  int cores(int cluster) const {
    return platform.clusters[static_cast<std::size_t>(cluster)].core_count;
  }

  bool operator==(const Instance&) const = default;
};

// Zero-based window and cluster of one task. Documents use 1-based indices.
struct Placement {
  int window = 0;
  int cluster = 0;

  bool operator==(const Placement&) const = default;
};

// placements[t] belongs to instance.tasks[t]. window_lengths_ms has one entry
// per window (instance.max_windows entries).
struct Assignment {
  std::vector<Placement> placements;
  std::vector<Millis> window_lengths_ms;

  bool operator==(const Assignment&) const = default;
};

// Builds an assignment whose window lengths are derived tight.
Assignment make_assignment(const Instance& instance,
                           std::vector<Placement> placements);

std::vector<std::string> validate_instance(const Instance& instance);

enum class Constraint {
  kAllAssigned,
  kClusterCapacity,
  kWindowLength,
  kFrameBudget,
};

const char* to_string(Constraint c);

struct Violation {
  Constraint constraint;
  std::string message;
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<Violation> violations;

  bool violates(Constraint c) const;
};

// Checks the four problem constraints against the stored window lengths.
// Throws InputError when the assignment does not structurally match the
// instance (placement count, window count, indices out of range).
FeasibilityReport check_feasible(const Instance& instance,
                                 const Assignment& assignment);

// l_j = max exec time of the tasks placed in window j, 0 for empty windows.
std::vector<Millis> derive_window_lengths(
    const Instance& instance, const std::vector<Placement>& placements);

// slots[window][cluster][core] holds a zero-based task index, or nullopt when
// the core idles. Tasks fill the cores of a (window, cluster) in ascending
// task id order.
struct CoreSchedule {
  std::vector<std::vector<std::vector<std::optional<int>>>> slots;

  const std::vector<std::optional<int>>& at(int window, int cluster) const {
    return slots[static_cast<std::size_t>(window)]
                [static_cast<std::size_t>(cluster)];
  }
};

// Throws InputError if the assignment is infeasible.
CoreSchedule derive_core_schedule(const Instance& instance,
                                  const Assignment& assignment);

// Total processing time sum_i e_{i,k(i)} in ms.
Millis total_processing_time(const Instance& instance,
                             const std::vector<Placement>& placements);

// h * sum_k q_k - sum_i e_{i,k(i)}, in ms * cores.
Millis total_idle_time(const Instance& instance, const Assignment& assignment);

// Throws InputError unless the placement vector fits the instance's index
// ranges.
void require_structure(const Instance& instance,
                       const std::vector<Placement>& placements);

}  // namespace thermosched
