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

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace thermosched {

GanttChart build_gantt(const Instance& instance, const Assignment& assignment) {
  const CoreSchedule schedule = derive_core_schedule(instance, assignment);
  GanttChart chart;
  chart.frame_ms = instance.major_frame_ms;
  for (int k = 0; k < instance.cluster_count(); ++k) {
    const Cluster& c = instance.platform.clusters[static_cast<std::size_t>(k)];
    for (int r = 0; r < c.core_count; ++r) {
      std::string label = c.label.empty() ? "cluster " + std::to_string(k + 1) : c.label;
      chart.rows.push_back({k + 1, r + 1, label + " #" + std::to_string(r + 1)});
    }
  }
  Millis start = 0;
  for (int j = 0; j < instance.max_windows; ++j) {
    for (int k = 0; k < instance.cluster_count(); ++k) {
      const auto& cores = schedule.at(j, k);
      for (std::size_t r = 0; r < cores.size(); ++r) {
        if (!cores[r]) continue;
        const int t = *cores[r];
        const Task& task = instance.tasks[static_cast<std::size_t>(t)];
        chart.bars.push_back({task.id, task.name, j + 1, k + 1, static_cast<int>(r) + 1, start,
                              instance.on(t, k).exec_time_ms});
      }
    }
    const Millis length = assignment.window_lengths_ms[static_cast<std::size_t>(j)];
    start += length;
    if (length > 0) chart.separators_ms.push_back(start);
  }
  std::stable_sort(chart.bars.begin(), chart.bars.end(),
                   [](const GanttBar& a, const GanttBar& b) { return a.task_id < b.task_id; });
  return chart;
}

nlohmann::json gantt_to_json(const GanttChart& chart) {
  nlohmann::json rows = nlohmann::json::array();
  for (const GanttRow& r : chart.rows) {
    rows.push_back({{"cluster", r.cluster}, {"core", r.core}, {"label", r.label}});
  }
  nlohmann::json bars = nlohmann::json::array();
  for (const GanttBar& b : chart.bars) {
    bars.push_back({{"task_id", b.task_id},
                    {"name", b.name},
                    {"window", b.window},
                    {"cluster", b.cluster},
                    {"core", b.core},
                    {"start_ms", b.start_ms},
                    {"length_ms", b.length_ms}});
  }
  return {{"frame_ms", chart.frame_ms},
          {"rows", rows},
          {"bars", bars},
          {"separators_ms", chart.separators_ms}};
}

namespace {

constexpr double kLabelWidth = 110.0;
constexpr double kPlotWidth = 800.0;
constexpr double kRowHeight = 26.0;
constexpr double kTop = 10.0;
constexpr double kAxis = 24.0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* fill_for(int task_id) {
  static const char* kPalette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                                   "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};
  return kPalette[static_cast<std::size_t>(task_id) % std::size(kPalette)];
}

}  // namespace

std::string gantt_to_svg(const GanttChart& chart) {
  const double scale = chart.frame_ms > 0 ? kPlotWidth / static_cast<double>(chart.frame_ms) : 0.0;
  const double plot_height = kRowHeight * static_cast<double>(chart.rows.size());
  const double width = kLabelWidth + kPlotWidth + 20.0;
  const double height = kTop + plot_height + kAxis + 10.0;
  auto x_of = [&](Millis t) { return kLabelWidth + scale * static_cast<double>(t); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\""
     << fmt(height) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "  <rect class=\"frame\" x=\"" << fmt(kLabelWidth) << "\" y=\"" << fmt(kTop)
     << "\" width=\"" << fmt(kPlotWidth) << "\" height=\"" << fmt(plot_height)
     << "\" fill=\"none\" stroke=\"#000\"/>\n";
  for (std::size_t i = 0; i < chart.rows.size(); ++i) {
    const double y = kTop + kRowHeight * static_cast<double>(i);
    os << "  <text class=\"row\" x=\"" << fmt(kLabelWidth - 6.0) << "\" y=\""
       << fmt(y + kRowHeight * 0.65) << "\" text-anchor=\"end\">" << escape(chart.rows[i].label)
       << "</text>\n";
  }
  for (const GanttBar& b : chart.bars) {
    std::size_t row = 0;
    while (row < chart.rows.size() &&
           (chart.rows[row].cluster != b.cluster || chart.rows[row].core != b.core)) {
      ++row;
    }
    const double y = kTop + kRowHeight * static_cast<double>(row) + 3.0;
    os << "  <g class=\"bar\" data-task=\"" << b.task_id << "\" data-window=\"" << b.window
       << "\">\n";
    os << "    <rect x=\"" << fmt(x_of(b.start_ms)) << "\" y=\"" << fmt(y) << "\" width=\""
       << fmt(scale * static_cast<double>(b.length_ms)) << "\" height=\""
       << fmt(kRowHeight - 6.0) << "\" fill=\"" << fill_for(b.task_id)
       << "\" stroke=\"#333\"/>\n";
    os << "    <text x=\"" << fmt(x_of(b.start_ms) + 3.0) << "\" y=\""
       << fmt(y + kRowHeight * 0.5) << "\" fill=\"#fff\">"
       << escape(b.name.empty() ? "T" + std::to_string(b.task_id) : b.name) << "</text>\n";
    os << "  </g>\n";
  }
  for (Millis s : chart.separators_ms) {
    os << "  <line class=\"separator\" x1=\"" << fmt(x_of(s)) << "\" y1=\"" << fmt(kTop)
       << "\" x2=\"" << fmt(x_of(s)) << "\" y2=\"" << fmt(kTop + plot_height)
       << "\" stroke=\"#c00\" stroke-width=\"2\" stroke-dasharray=\"4 2\"/>\n";
  }
  os << "  <text class=\"axis\" x=\"" << fmt(kLabelWidth) << "\" y=\""
     << fmt(kTop + plot_height + 16.0) << "\">0</text>\n";
  os << "  <text class=\"axis\" x=\"" << fmt(kLabelWidth + kPlotWidth) << "\" y=\""
     << fmt(kTop + plot_height + 16.0) << "\" text-anchor=\"end\">" << chart.frame_ms
     << " ms</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace thermosched
