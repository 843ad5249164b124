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

#include "thermosched/methods.hpp"

#include <chrono>

#include "thermosched/flow.hpp"
#include "thermosched/greedy.hpp"

namespace thermosched {

const char* to_string(Method method) {
  switch (method) {
    case Method::kIlpSm: return "ilp-sm";
    case Method::kQpLrUb: return "qp-lr-ub";
    case Method::kBbSm: return "bb-sm";
    case Method::kBbLr: return "bb-lr";
    case Method::kHeur: return "heur";
    case Method::kIdleMin: return "idle-min";
    case Method::kIdleMax: return "idle-max";
    case Method::kFlowFixed: return "flow-fixed";
  }
  return "unknown";
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods = {
      Method::kIlpSm, Method::kQpLrUb,  Method::kBbSm,    Method::kBbLr,
      Method::kHeur,  Method::kIdleMin, Method::kIdleMax, Method::kFlowFixed};
  return methods;
}

std::optional<Method> parse_method(const std::string& text) {
  for (Method m : all_methods()) {
    if (text == to_string(m)) return m;
  }
  return std::nullopt;
}

bool needs_coefficients(Method method) {
  return method == Method::kQpLrUb || method == Method::kBbLr;
}

bool needs_window_lengths(Method method) { return method == Method::kFlowFixed; }

namespace {

SearchResult run_exact(const Instance& instance, ObjectiveKind kind,
                       const MethodOptions& options) {
  ObjectiveSpec spec{kind, std::nullopt};
  if (kind == ObjectiveKind::kLrUbPower) spec.coefficients = options.coefficients;
  return solve(instance, spec, PartialFix::none(instance.task_count()), options.time_limit_ms);
}

SearchResult run_flow(const Instance& instance, const MethodOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const FlowNetwork net = build_network(instance, *options.window_lengths_ms);
  FlowSolution sol = min_cost_assignment(net);
  SearchResult r;
  r.status = sol.feasible ? SearchStatus::kOptimal : SearchStatus::kInfeasible;
  r.assignment = std::move(sol.assignment);
  r.objective_value = sol.total_cost;
  r.lower_bound = sol.total_cost;
  r.nodes_explored = sol.flow_value;
  r.elapsed_ms = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - start)
                     .count();
  return r;
}

}  // namespace

MethodRun run_method(const Instance& instance, Method method, const MethodOptions& options) {
  if (needs_coefficients(method) && !options.coefficients) {
    throw InputError(std::string(to_string(method)) + " needs regression coefficients");
  }
  if (needs_window_lengths(method) && !options.window_lengths_ms) {
    throw InputError(std::string(to_string(method)) + " needs window lengths");
  }
  MethodRun run;
  run.method = method;
  switch (method) {
    case Method::kIlpSm:
      run.result = run_exact(instance, ObjectiveKind::kSmPower, options);
      break;
    case Method::kQpLrUb:
      run.result = run_exact(instance, ObjectiveKind::kLrUbPower, options);
      break;
    case Method::kIdleMin:
      run.result = run_exact(instance, ObjectiveKind::kIdleMin, options);
      break;
    case Method::kIdleMax:
      run.result = run_exact(instance, ObjectiveKind::kIdleMax, options);
      break;
    case Method::kBbSm:
    case Method::kBbLr: {
      GaConfig config = options.ga;
      config.time_limit_ms = options.time_limit_ms;
      config.rng_seed = options.seed;
      const bool lr = method == Method::kBbLr;
      GaResult ga = run_ga(instance, lr ? PowerModel::kLR : PowerModel::kSM,
                           lr ? &*options.coefficients : nullptr, config);
      run.result = std::move(ga.result);
      run.trace = std::move(ga.trace);
      break;
    }
    case Method::kHeur:
      run.result = greedy(instance, options.time_limit_ms);
      break;
    case Method::kFlowFixed:
      run.result = run_flow(instance, options);
      break;
  }
  return run;
}

}  // namespace thermosched
