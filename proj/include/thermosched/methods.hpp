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

// One entry point for every optimization method of the toolkit.
//
//   ilp-sm      exact search, SM power
//   qp-lr-ub    exact search, LR-UB power
//   bb-sm       genetic search, SM fitness
//   bb-lr       genetic search, LR fitness
//   heur        energy greedy
//   idle-min    exact search, least total idle time
//   idle-max    exact search, most total idle time
//   flow-fixed  min-cost flow over given window lengths

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "thermosched/exact_search.hpp"
#include "thermosched/ga.hpp"
#include "thermosched/model.hpp"
#include "thermosched/power.hpp"

namespace thermosched {

enum class Method { kIlpSm, kQpLrUb, kBbSm, kBbLr, kHeur, kIdleMin, kIdleMax, kFlowFixed };

const char* to_string(Method method);
std::optional<Method> parse_method(const std::string& text);
const std::vector<Method>& all_methods();

bool needs_coefficients(Method method);
bool needs_window_lengths(Method method);

struct MethodOptions {
  std::int64_t time_limit_ms = 60'000;
  std::uint64_t seed = 1;
  std::optional<RegressionCoefficients> coefficients;
  std::optional<std::vector<Millis>> window_lengths_ms;
  // Used by bb-sm and bb-lr; its time limit and seed are overridden by the
  // fields above.
  GaConfig ga;
};

struct MethodRun {
  Method method = Method::kIlpSm;
  SearchResult result;
  std::vector<GaTracePoint> trace;  // genetic methods only
};

// Throws InputError when a required option is missing.
MethodRun run_method(const Instance& instance, Method method, const MethodOptions& options);

}  // namespace thermosched
