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
#include <string>
#include <vector>

#include "thermosched/model.hpp"
#include "thermosched/power.hpp"

namespace thermosched {

enum class ObjectiveKind {
  kSmPower,        // minimize SM schedule power
  kLrUbPower,      // minimize LR-UB schedule power
  kIdleMin,        // minimize total idle time
  kIdleMax,        // maximize total idle time
  kFeasibilityOnly,
};

enum class Sense { kMinimize, kMaximize };

struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::kSmPower;
  // Required for kLrUbPower.
  std::optional<RegressionCoefficients> coefficients;

  Sense sense() const {
    return kind == ObjectiveKind::kIdleMax ? Sense::kMaximize : Sense::kMinimize;
  }
};

const char* to_string(ObjectiveKind kind);

enum class SearchStatus {
  kOptimal,
  kFeasible,  // heuristic result, optimality not claimed
  kFeasibleTimeout,
  kInfeasible,
  kUnknownTimeout,
};

const char* to_string(SearchStatus status);

struct SearchResult {
  SearchStatus status = SearchStatus::kUnknownTimeout;
  std::optional<Assignment> assignment;
  // Watts for the power objectives, ms * cores for the idle objectives, 0 for
  // feasibility.
  double objective_value = 0.0;
  // Proven bound in the objective's sense: a lower bound when minimizing, an
  // upper bound when maximizing.
  double lower_bound = 0.0;
  std::int64_t nodes_explored = 0;
  double elapsed_ms = 0.0;

  bool has_solution() const { return assignment.has_value(); }
};

// Optional cluster fix per task (zero-based cluster index); windows stay free.
struct PartialFix {
  std::vector<std::optional<int>> cluster;

  static PartialFix none(int task_count) {
    return PartialFix{std::vector<std::optional<int>>(static_cast<std::size_t>(task_count))};
  }
};

// Value of `objective` for a complete assignment, computed through the power
// models and idle-time accounting.
double objective_value(const Instance& instance, const Assignment& assignment,
                       const ObjectiveSpec& objective);

// Depth-first branch-and-bound over task -> (window, cluster) placements.
// Throws InputError for an invalid partial fix or missing coefficients.
SearchResult solve(const Instance& instance, const ObjectiveSpec& objective,
                   const PartialFix& partial, std::int64_t time_limit_ms);

// Exhaustive enumeration, used as a testing oracle. Windows are enumerated up
// to relabeling. Throws InputError beyond 10 tasks or 5 windows.
SearchResult brute_force_optimum(const Instance& instance,
                                 const ObjectiveSpec& objective,
                                 const PartialFix& partial);

}  // namespace thermosched
