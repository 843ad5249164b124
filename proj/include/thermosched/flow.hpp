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

// Exact solver for the fixed-window problem: window lengths are given and
// only the task -> (window, cluster) placement is chosen, minimizing the
// summed task energy cost d_ik. The placement is a minimum-cost flow from the
// task nodes through window-cluster nodes into a sink.

#pragma once

#include <optional>
#include <vector>

#include "thermosched/model.hpp"

namespace thermosched {

struct FlowArc {
  int from = 0;
  int to = 0;
  int capacity = 0;
  double cost = 0.0;
};

// Node layout: task nodes [0, n), window-cluster node WC_jk at
// n + j * m + k, sink last.
struct FlowNetwork {
  int task_count = 0;
  int window_count = 0;
  int cluster_count = 0;
  std::vector<Millis> window_lengths_ms;
  std::vector<FlowArc> arcs;
  std::vector<int> balances;
  // Zero-based indices of tasks that fit in no (window, cluster).
  std::vector<int> unplaceable_tasks;

  int node_count() const { return task_count + window_count * cluster_count + 1; }
  int window_cluster_node(int window, int cluster) const {
    return task_count + window * cluster_count + cluster;
  }
  int sink() const { return node_count() - 1; }
};

// d_ik: the explicit energy cost when present, otherwise a_ik * e_ik.
double energy_cost(const Instance& instance, int task, int cluster);

// Throws InputError unless there is one non-negative length per window and
// the lengths fit in the major frame.
FlowNetwork build_network(const Instance& instance,
                          const std::vector<Millis>& window_lengths_ms);

struct FlowSolution {
  bool feasible = false;
  // Placements decoded from the unit flows; window lengths are the fixed ones.
  std::optional<Assignment> assignment;
  double total_cost = 0.0;
  int flow_value = 0;
  // Flow on each arc of the network, same order as FlowNetwork::arcs.
  std::vector<int> arc_flow;
};

// Successive shortest paths with node potentials.
FlowSolution min_cost_assignment(const FlowNetwork& network);

}  // namespace thermosched
