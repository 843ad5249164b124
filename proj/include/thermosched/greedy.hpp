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

#include "thermosched/exact_search.hpp"
#include "thermosched/model.hpp"

namespace thermosched {

// Energy-greedy cluster fixing. Tasks are taken by decreasing largest a * e;
// each is fixed to the cheapest cluster (by a * e) for which the exact
// feasibility search still completes the schedule. The returned assignment
// is the last feasible completion found.
//
// Status: kFeasible on success, kInfeasible when the instance has no feasible
// assignment, kFeasibleTimeout with the last completion when the limit ran
// out midway, kUnknownTimeout when it ran out before any completion was
// found. objective_value is the summed a * e of the result.
SearchResult greedy(const Instance& instance, std::int64_t time_limit_ms);

}  // namespace thermosched
