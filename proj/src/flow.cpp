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

#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

namespace thermosched {

double energy_cost(const Instance& instance, int task, int cluster) {
  const TaskOnCluster& tc = instance.on(task, cluster);
  if (tc.energy_cost) return *tc.energy_cost;
  return tc.activity_coef * static_cast<double>(tc.exec_time_ms);
}

FlowNetwork build_network(const Instance& instance,
                          const std::vector<Millis>& window_lengths_ms) {
  const int n = instance.task_count();
  const int m = instance.cluster_count();
  const int q = instance.max_windows;
  if (static_cast<int>(window_lengths_ms.size()) != q) {
    throw InputError("expected " + std::to_string(q) + " window lengths, got " +
                     std::to_string(window_lengths_ms.size()));
  }
  Millis total = 0;
  for (Millis l : window_lengths_ms) {
    if (l < 0) throw InputError("window lengths must be non-negative");
    total += l;
  }
  if (total > instance.major_frame_ms) {
    throw InputError("window lengths sum to " + std::to_string(total) +
                     " ms, more than the major frame of " +
                     std::to_string(instance.major_frame_ms) + " ms");
  }

  FlowNetwork net;
  net.task_count = n;
  net.window_count = q;
  net.cluster_count = m;
  net.window_lengths_ms = window_lengths_ms;
  net.balances.assign(static_cast<std::size_t>(net.node_count()), 0);
  for (int i = 0; i < n; ++i) {
    net.balances[static_cast<std::size_t>(i)] = 1;
    bool any = false;
    for (int k = 0; k < m; ++k) {
      for (int j = 0; j < q; ++j) {
        if (instance.on(i, k).exec_time_ms <= window_lengths_ms[static_cast<std::size_t>(j)]) {
          net.arcs.push_back({i, net.window_cluster_node(j, k), 1, energy_cost(instance, i, k)});
          any = true;
        }
      }
    }
    if (!any) net.unplaceable_tasks.push_back(i);
  }
  for (int k = 0; k < m; ++k) {
    for (int j = 0; j < q; ++j) {
      net.arcs.push_back({net.window_cluster_node(j, k), net.sink(), instance.cores(k), 0.0});
    }
  }
  net.balances.back() = -n;
  return net;
}

namespace {

struct ResidualEdge {
  int to;
  int capacity;
  double cost;
  int reverse;  // index of the paired edge in graph[to]
  int arc;      // index into FlowNetwork::arcs, -1 for the source edges
};

class Residual {
 public:
  explicit Residual(int nodes) : graph_(static_cast<std::size_t>(nodes)) {}

  void add(int from, int to, int capacity, double cost, int arc) {
    auto& f = graph_[static_cast<std::size_t>(from)];
    auto& t = graph_[static_cast<std::size_t>(to)];
    f.push_back({to, capacity, cost, static_cast<int>(t.size()), arc});
    t.push_back({from, 0, -cost, static_cast<int>(f.size()) - 1, arc});
  }

  std::vector<std::vector<ResidualEdge>>& graph() { return graph_; }

 private:
  std::vector<std::vector<ResidualEdge>> graph_;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

FlowSolution min_cost_assignment(const FlowNetwork& network) {
  const int nodes = network.node_count() + 1;
  const int source = nodes - 1;
  const int sink = network.sink();
  Residual residual(nodes);
  for (int i = 0; i < network.task_count; ++i) residual.add(source, i, 1, 0.0, -1);
  for (std::size_t a = 0; a < network.arcs.size(); ++a) {
    const FlowArc& arc = network.arcs[a];
    residual.add(arc.from, arc.to, arc.capacity, arc.cost, static_cast<int>(a));
  }
  auto& graph = residual.graph();

  // The network is layered, so one Bellman-Ford style pass in topological
  // order yields exact initial potentials even with negative costs.
  std::vector<double> potential(static_cast<std::size_t>(nodes), kInf);
  potential[static_cast<std::size_t>(source)] = 0.0;
  std::vector<int> order(static_cast<std::size_t>(nodes));
  order[0] = source;
  std::iota(order.begin() + 1, order.end(), 0);
  for (int v : order) {
    const double pv = potential[static_cast<std::size_t>(v)];
    if (pv == kInf) continue;
    for (const ResidualEdge& e : graph[static_cast<std::size_t>(v)]) {
      if (e.capacity > 0 && pv + e.cost < potential[static_cast<std::size_t>(e.to)]) {
        potential[static_cast<std::size_t>(e.to)] = pv + e.cost;
      }
    }
  }
  for (double& p : potential) {
    if (p == kInf) p = 0.0;
  }

  FlowSolution out;
  std::vector<double> dist(static_cast<std::size_t>(nodes));
  std::vector<std::pair<int, int>> parent(static_cast<std::size_t>(nodes));
  using Entry = std::pair<double, int>;
  while (out.flow_value < network.task_count) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(parent.begin(), parent.end(), std::pair{-1, -1});
    dist[static_cast<std::size_t>(source)] = 0.0;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
      const auto [d, v] = heap.top();
      heap.pop();
      if (d > dist[static_cast<std::size_t>(v)]) continue;
      const auto& edges = graph[static_cast<std::size_t>(v)];
      for (std::size_t idx = 0; idx < edges.size(); ++idx) {
        const ResidualEdge& e = edges[idx];
        if (e.capacity <= 0) continue;
        double reduced = e.cost + potential[static_cast<std::size_t>(v)] -
                         potential[static_cast<std::size_t>(e.to)];
        if (reduced < 0.0) reduced = 0.0;
        const double nd = d + reduced;
        if (nd < dist[static_cast<std::size_t>(e.to)]) {
          dist[static_cast<std::size_t>(e.to)] = nd;
          parent[static_cast<std::size_t>(e.to)] = {v, static_cast<int>(idx)};
          heap.emplace(nd, e.to);
        }
      }
    }
    if (dist[static_cast<std::size_t>(sink)] == kInf) break;
    for (int v = 0; v < nodes; ++v) {
      if (dist[static_cast<std::size_t>(v)] < kInf) {
        potential[static_cast<std::size_t>(v)] += dist[static_cast<std::size_t>(v)];
      }
    }
    // Every path starts with a unit source edge, so it carries exactly one unit.
    for (int v = sink; v != source;) {
      const auto [u, idx] = parent[static_cast<std::size_t>(v)];
      ResidualEdge& e = graph[static_cast<std::size_t>(u)][static_cast<std::size_t>(idx)];
      e.capacity -= 1;
      graph[static_cast<std::size_t>(v)][static_cast<std::size_t>(e.reverse)].capacity += 1;
      v = u;
    }
    ++out.flow_value;
  }

  out.arc_flow.assign(network.arcs.size(), 0);
  for (int v = 0; v < source; ++v) {
    for (const ResidualEdge& e : graph[static_cast<std::size_t>(v)]) {
      if (e.arc >= 0 && network.arcs[static_cast<std::size_t>(e.arc)].from == v) {
        out.arc_flow[static_cast<std::size_t>(e.arc)] =
            network.arcs[static_cast<std::size_t>(e.arc)].capacity - e.capacity;
      }
    }
  }

  out.feasible = out.flow_value == network.task_count;
  if (!out.feasible) return out;

  Assignment asg;
  asg.placements.resize(static_cast<std::size_t>(network.task_count));
  asg.window_lengths_ms = network.window_lengths_ms;
  for (std::size_t a = 0; a < network.arcs.size(); ++a) {
    const FlowArc& arc = network.arcs[a];
    if (arc.from >= network.task_count || out.arc_flow[a] == 0) continue;
    const int wc = arc.to - network.task_count;
    asg.placements[static_cast<std::size_t>(arc.from)] =
        Placement{wc / network.cluster_count, wc % network.cluster_count};
    out.total_cost += arc.cost;
  }
  out.assignment = std::move(asg);
  return out;
}

}  // namespace thermosched
