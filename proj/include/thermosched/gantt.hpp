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

#include <string>
#include <vector>

#include <json.hpp>

#include "thermosched/model.hpp"

namespace thermosched {

// Indices in a chart are 1-based, like the documents.
struct GanttBar {
  int task_id = 0;
  std::string name;
  int window = 0;
  int cluster = 0;
  int core = 0;
  Millis start_ms = 0;
  Millis length_ms = 0;
};

struct GanttRow {
  int cluster = 0;
  int core = 0;
  std::string label;
};

struct GanttChart {
  Millis frame_ms = 0;
  std::vector<GanttRow> rows;  // one per core, cluster by cluster
  std::vector<GanttBar> bars;  // ascending task id
  // Frame offsets at the end of every window of positive length.
  std::vector<Millis> separators_ms;
};

// Windows are laid out back to back in index order from time 0. Throws
// InputError for an infeasible assignment.
GanttChart build_gantt(const Instance& instance, const Assignment& assignment);

nlohmann::json gantt_to_json(const GanttChart& chart);
std::string gantt_to_svg(const GanttChart& chart);

}  // namespace thermosched
