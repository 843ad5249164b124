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
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "thermosched/instgen.hpp"
#include "thermosched/methods.hpp"

namespace thermosched {

struct SweepConfig {
  std::vector<int> sizes;
  int repetitions = 1;
  std::vector<Method> methods;
  std::int64_t time_limit_ms = 60'000;
  std::uint64_t seed = 1;
  GeneratorConfig generator;  // n_tasks and rng_seed are set per cell
  Platform platform;
  KernelPool pool;
  std::optional<RegressionCoefficients> coefficients;
  // Window lengths for flow-fixed are the tight lengths of this method's
  // solution on the same instance; flow-fixed is skipped when it has none.
  Method flow_reference = Method::kHeur;
};

struct SweepRow {
  int n = 0;
  std::string method;
  int rep = 0;
  std::string status;
  double elapsed_ms = 0.0;
  double objective = 0.0;
  double bound = 0.0;
};

struct SweepSummaryRow {
  int n = 0;
  std::string method;
  int runs = 0;
  double mean_elapsed_ms = 0.0;
  std::map<std::string, int> status_counts;
};

// Instance seed for one (n, repetition) cell of a sweep.
std::uint64_t sweep_instance_seed(std::uint64_t seed, int n, int rep);

// Runs every method on every generated instance. `progress` is called after
// each row.
std::vector<SweepRow> scalability_sweep(
    const SweepConfig& config,
    const std::function<void(const SweepRow&)>& progress = nullptr);

std::vector<SweepSummaryRow> summarize(const std::vector<SweepRow>& rows);

// `n,method,rep,status,elapsed_ms,objective,bound`
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);
// `n,method,runs,mean_elapsed_ms,optimal,feasible,feasible_timeout,infeasible,unknown_timeout`
void write_summary_csv(const std::vector<SweepSummaryRow>& rows, std::ostream& out);

}  // namespace thermosched
