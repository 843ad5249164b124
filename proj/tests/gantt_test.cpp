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

#include "thermosched/gantt.hpp"

#include <gtest/gtest.h>

#include "support/random_instances.hpp"

namespace thermosched {
namespace {

TEST(BuildGantt, SevenBarsThreeSeparators) {
  const Instance inst = testing::seven_task_schedule_instance();
  const GanttChart chart = build_gantt(inst, testing::seven_task_schedule_assignment());
  EXPECT_EQ(chart.frame_ms, 600);
  EXPECT_EQ(chart.rows.size(), 6u);
  ASSERT_EQ(chart.bars.size(), 7u);
  EXPECT_EQ(chart.separators_ms, (std::vector<Millis>{150, 400, 600}));
  for (std::size_t i = 0; i < chart.bars.size(); ++i) {
    const GanttBar& b = chart.bars[i];
    EXPECT_EQ(b.task_id, static_cast<int>(i) + 1);
    EXPECT_EQ(b.start_ms, b.window == 1 ? 0 : 150);
    EXPECT_LE(b.core, inst.cores(b.cluster - 1));
  }
}

TEST(BuildGantt, NoTwoBarsShareACoreInAWindow) {
  const GanttChart chart = build_gantt(testing::seven_task_schedule_instance(), testing::seven_task_schedule_assignment());
  for (std::size_t i = 0; i < chart.bars.size(); ++i) {
    for (std::size_t j = i + 1; j < chart.bars.size(); ++j) {
      const GanttBar& a = chart.bars[i];
      const GanttBar& b = chart.bars[j];
      EXPECT_FALSE(a.window == b.window && a.cluster == b.cluster && a.core == b.core);
    }
  }
}

TEST(BuildGantt, EmptyScheduleHasOnlyRows) {
  Instance inst = testing::seven_task_schedule_instance();
  inst.tasks.clear();
  const Assignment empty{{}, {0, 0, 0}};
  const GanttChart chart = build_gantt(inst, empty);
  EXPECT_TRUE(chart.bars.empty());
  EXPECT_TRUE(chart.separators_ms.empty());
  EXPECT_EQ(chart.rows.size(), 6u);
  EXPECT_NE(gantt_to_svg(chart).find("class=\"frame\""), std::string::npos);
}

TEST(BuildGantt, InfeasibleAssignmentThrows) {
  const Instance inst = testing::seven_task_schedule_instance();
  Assignment a = testing::seven_task_schedule_assignment();
  a.window_lengths_ms[0] = 10;
  EXPECT_THROW(build_gantt(inst, a), InputError);
}

TEST(GanttExport, OutputIsDeterministic) {
  const Instance inst = testing::seven_task_schedule_instance();
  const GanttChart a = build_gantt(inst, testing::seven_task_schedule_assignment());
  const GanttChart b = build_gantt(inst, testing::seven_task_schedule_assignment());
  EXPECT_EQ(gantt_to_svg(a), gantt_to_svg(b));
  EXPECT_EQ(gantt_to_json(a).dump(), gantt_to_json(b).dump());
  const std::string svg = gantt_to_svg(a);
  std::size_t bars = 0;
  std::size_t separators = 0;
  for (std::size_t p = svg.find("class=\"bar\""); p != std::string::npos;
       p = svg.find("class=\"bar\"", p + 1)) {
    ++bars;
  }
  for (std::size_t p = svg.find("class=\"separator\""); p != std::string::npos;
       p = svg.find("class=\"separator\"", p + 1)) {
    ++separators;
  }
  EXPECT_EQ(bars, 7u);
  EXPECT_EQ(separators, 3u);
  EXPECT_EQ(gantt_to_json(a)["bars"].size(), 7u);
}

}  // namespace
}  // namespace thermosched
