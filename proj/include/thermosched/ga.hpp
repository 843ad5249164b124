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

// Black-box genetic search over a continuous encoding: one gene x_i in [0, 1)
// per task. The unit interval is split evenly into m cluster slices, and the
// position inside a slice, scaled to [0, q), is the task's window preference.
// A repair pass turns preferences into a feasible assignment or a failure.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include <json.hpp>

#include "thermosched/exact_search.hpp"
#include "thermosched/model.hpp"
#include "thermosched/power.hpp"

namespace thermosched {

using Genome = std::vector<double>;

// Zero-based preferred cluster and window; preference lies in [0, q).
struct GenePreference {
  int cluster = 0;
  int window = 0;
  double preference = 0.0;

  bool operator==(const GenePreference&) const = default;
};

GenePreference decode_gene(double x, int cluster_count, int window_count);
std::vector<GenePreference> decode(const Genome& genome, const Instance& instance);

// Visits windows cyclically for two rounds. In each visit the unassigned
// tasks preferring the window are placed in order of preference; a task whose
// cluster is full moves its preference to the next window with preference 0.
// Returns nullopt when a task stays unassigned or the tight window lengths
// exceed the major frame.
std::optional<Assignment> reconstruct(const Genome& genome, const Instance& instance);

// The repair pass with its shortfall: tasks left unassigned and how far the
// window lengths overrun the major frame. `assignment` is set iff both are 0.
struct Reconstruction {
  std::optional<Assignment> assignment;
  int unassigned = 0;
  Millis frame_excess_ms = 0;
};

Reconstruction reconstruct_detailed(const Genome& genome, const Instance& instance);

struct GaConfig {
  double crossover_rate = 0.8;
  double mutation_rate = 0.2;
  std::optional<int> population_size;  // 50 * n when unset
  double elite_discard_fraction = 0.10;
  std::int64_t time_limit_ms = 10'000;
  std::uint64_t rng_seed = 1;
  double bga_mutation_range = 0.1;
  int bga_precision_bits = 16;
  // Generations without improvement of the segment best before a restart.
  int stall_generations = 30;
  // Caps the total number of generations. A run that ends on this cap rather
  // than on the clock is reproducible independently of machine speed.
  std::optional<std::int64_t> generation_budget;

  int effective_population(int task_count) const;
  // Throws InputError on out-of-range values.
  void validate() const;
};

// Fields missing from `doc` keep their value in `base`.
GaConfig ga_config_from_json(const nlohmann::json& doc, GaConfig base = {});
nlohmann::json ga_config_to_json(const GaConfig& config);

struct GaTracePoint {
  std::int64_t generation = 0;
  int restart = 0;
  double best_fitness = 0.0;  // best of the current restart segment
};

struct GaResult {
  // Status kFeasible with the best assignment, or kInfeasible when no genome
  // was ever reconstructed.
  SearchResult result;
  std::vector<GaTracePoint> trace;
  int restarts = 0;
  std::int64_t evaluations = 0;
};

// Fitness is the schedule power of the reconstructed assignment under `model`
// (kSM or kLR). Failed reconstructions rank after every success, ordered among
// themselves by unassigned tasks, then by frame overrun.
GaResult run_ga(const Instance& instance, PowerModel model,
                const RegressionCoefficients* coefficients, const GaConfig& config);

// CSV with header `generation,restart,best_fitness`.
void write_fitness_trace(const std::vector<GaTracePoint>& trace, std::ostream& out);

}  // namespace thermosched
