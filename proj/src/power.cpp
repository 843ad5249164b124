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

#include "thermosched/power.hpp"

#include <algorithm>
#include <sstream>

namespace thermosched {

double RegressionCoefficients::weight(int cluster, double activity,
                                      double offset) const {
  const auto& b = beta[static_cast<std::size_t>(cluster)];
  return activity * b[0] + offset * b[1];
}

void RegressionCoefficients::require_compatible(const Platform& platform) const {
  if (static_cast<int>(beta.size()) != platform.cluster_count()) {
    std::ostringstream os;
    os << "regression coefficients cover " << beta.size()
       << " clusters; platform has " << platform.cluster_count();
    throw InputError(os.str());
  }
  for (std::size_t k = 0; k < beta.size(); ++k) {
    if (beta[k].size() != static_cast<std::size_t>(kFeatureDim)) {
      std::ostringstream os;
      os << "cluster " << k + 1 << " has " << beta[k].size()
         << " regression coefficients; expected " << kFeatureDim;
      throw InputError(os.str());
    }
  }
}

const char* to_string(PowerModel model) {
  switch (model) {
    case PowerModel::kSM: return "sm";
    case PowerModel::kLR: return "lr";
    case PowerModel::kLRUB: return "lr-ub";
  }
  return "unknown";
}

std::optional<PowerModel> parse_power_model(const std::string& text) {
  if (text == "sm" || text == "SM") return PowerModel::kSM;
  if (text == "lr" || text == "LR") return PowerModel::kLR;
  if (text == "lr-ub" || text == "LR_UB" || text == "lr_ub") return PowerModel::kLRUB;
  return std::nullopt;
}

namespace {

void require_fits(std::span<const WindowTask> tasks, Millis length) {
  for (const WindowTask& t : tasks) {
    if (t.exec_time_ms > length) {
      std::ostringstream os;
      os << "task of " << t.exec_time_ms << " ms does not fit a window of "
         << length << " ms";
      throw InputError(os.str());
    }
  }
}

std::vector<std::vector<WindowTask>> tasks_by_window(const Instance& instance,
                                                     const Assignment& assignment) {
  std::vector<std::vector<WindowTask>> out(
      static_cast<std::size_t>(instance.max_windows));
  for (std::size_t t = 0; t < assignment.placements.size(); ++t) {
    const Placement& p = assignment.placements[t];
    const TaskOnCluster& tc = instance.on(static_cast<int>(t), p.cluster);
    out[static_cast<std::size_t>(p.window)].push_back(
        {p.cluster, tc.exec_time_ms, tc.activity_coef, tc.offset_coef});
  }
  return out;
}

PowerEstimate with_idle(double idle, double activity, double offset) {
  return {idle + activity + offset, idle, activity, offset};
}

}  // namespace

PowerEstimate sm_window_power(const Platform& platform,
                              std::span<const WindowTask> tasks,
                              Millis window_length_ms) {
  require_fits(tasks, window_length_ms);
  if (tasks.empty()) return with_idle(platform.idle_power_watts, 0.0, 0.0);
  const double l = static_cast<double>(window_length_ms);
  double activity = 0.0;
  double max_offset = tasks.front().offset_coef;
  for (const WindowTask& t : tasks) {
    activity += t.activity_coef * static_cast<double>(t.exec_time_ms) / l;
    max_offset = std::max(max_offset, t.offset_coef);
  }
  return with_idle(platform.idle_power_watts, activity, max_offset);
}

PowerEstimate lr_ub_window_power(const Platform& platform,
                                 const RegressionCoefficients& coefficients,
                                 std::span<const WindowTask> tasks,
                                 Millis window_length_ms) {
  coefficients.require_compatible(platform);
  require_fits(tasks, window_length_ms);
  double activity = 0.0;
  double offset = 0.0;
  for (const WindowTask& t : tasks) {
    const auto& b = coefficients.beta[static_cast<std::size_t>(t.cluster)];
    activity += t.activity_coef * b[0];
    offset += t.offset_coef * b[1];
  }
  return with_idle(platform.idle_power_watts, activity, offset);
}

namespace {

std::vector<ProcessingInterval> split_window(const Instance& instance,
                                             const CoreSchedule& schedule,
                                             Millis length, int window) {
  const int m = instance.cluster_count();
  std::vector<Millis> cuts{0, length};
  for (int k = 0; k < m; ++k) {
    for (const auto& slot : schedule.at(window, k)) {
      if (slot) cuts.push_back(instance.on(*slot, k).exec_time_ms);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<ProcessingInterval> out;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    ProcessingInterval interval;
    interval.length_ms = cuts[c + 1] - cuts[c];
    interval.active.resize(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
      for (const auto& slot : schedule.at(window, k)) {
        const bool running = slot && instance.on(*slot, k).exec_time_ms > cuts[c];
        interval.active[static_cast<std::size_t>(k)].push_back(
            running ? slot : std::nullopt);
      }
    }
    out.push_back(std::move(interval));
  }
  return out;
}

}  // namespace

std::vector<ProcessingInterval> decompose_intervals(const Instance& instance,
                                                    const Assignment& assignment,
                                                    int window) {
  const CoreSchedule schedule = derive_core_schedule(instance, assignment);
  if (window < 0 || window >= instance.max_windows) {
    throw InputError("window index out of range");
  }
  return split_window(instance, schedule,
                      assignment.window_lengths_ms[static_cast<std::size_t>(window)],
                      window);
}

PowerEstimate lr_interval_power(const Instance& instance,
                                const RegressionCoefficients& coefficients,
                                const ProcessingInterval& interval) {
  coefficients.require_compatible(instance.platform);
  double activity = 0.0;
  double offset = 0.0;
  for (std::size_t k = 0; k < interval.active.size(); ++k) {
    double sum_a = 0.0;
    double sum_b = 0.0;
    for (const auto& slot : interval.active[k]) {
      if (!slot) continue;  // the idle task has a zero feature vector
      const TaskOnCluster& tc = instance.on(*slot, static_cast<int>(k));
      sum_a += tc.activity_coef;
      sum_b += tc.offset_coef;
    }
    activity += coefficients.beta[k][0] * sum_a;
    offset += coefficients.beta[k][1] * sum_b;
  }
  return with_idle(instance.platform.idle_power_watts, activity, offset);
}

ScheduleEvaluation evaluate_schedule(const Instance& instance,
                                     const Assignment& assignment,
                                     PowerModel model,
                                     const RegressionCoefficients* coefficients) {
  require_structure(instance, assignment.placements);
  if (model != PowerModel::kSM) {
    if (coefficients == nullptr) {
      throw InputError(std::string("power model ") + to_string(model) +
                       " needs regression coefficients");
    }
    coefficients->require_compatible(instance.platform);
  }
  const double h = static_cast<double>(instance.major_frame_ms);
  ScheduleEvaluation eval;
  double activity = 0.0;
  double offset = 0.0;

  auto add = [&](int window, Millis start, Millis length, const PowerEstimate& p) {
    const double scale = static_cast<double>(length) / h;
    activity += p.activity * scale;
    offset += p.offset * scale;
    const double above = p.activity + p.offset;
    eval.contributions.push_back({window, start, length, above, above * scale});
  };

  std::optional<CoreSchedule> schedule;
  if (model == PowerModel::kLR) schedule = derive_core_schedule(instance, assignment);
  if (static_cast<int>(assignment.window_lengths_ms.size()) != instance.max_windows) {
    throw InputError("assignment window count does not match the instance");
  }
  const auto by_window = tasks_by_window(instance, assignment);

  for (int j = 0; j < instance.max_windows; ++j) {
    const Millis l = assignment.window_lengths_ms[static_cast<std::size_t>(j)];
    const auto& tasks = by_window[static_cast<std::size_t>(j)];
    if (l <= 0) {
      require_fits(tasks, l);
      continue;
    }
    switch (model) {
      case PowerModel::kSM:
        add(j, 0, l, sm_window_power(instance.platform, tasks, l));
        break;
      case PowerModel::kLRUB:
        add(j, 0, l, lr_ub_window_power(instance.platform, *coefficients, tasks, l));
        break;
      case PowerModel::kLR: {
        Millis start = 0;
        for (const ProcessingInterval& interval :
             split_window(instance, *schedule, l, j)) {
          add(j, start, interval.length_ms,
              lr_interval_power(instance, *coefficients, interval));
          start += interval.length_ms;
        }
        break;
      }
    }
  }
  eval.power = with_idle(instance.platform.idle_power_watts, activity, offset);
  return eval;
}

PowerEstimate schedule_power(const Instance& instance,
                             const Assignment& assignment, PowerModel model,
                             const RegressionCoefficients* coefficients) {
  return evaluate_schedule(instance, assignment, model, coefficients).power;
}

double power_to_temperature(const Platform& platform, double power_watts) {
  const auto thermal = platform.thermal();
  if (!thermal) {
    std::string missing;
    if (!platform.thermal_b) missing += " thermal_b";
    if (!platform.thermal_g) missing += " thermal_g";
    if (!platform.ambient_celsius) missing += " ambient_celsius";
    throw InputError("platform is missing thermal parameters:" + missing);
  }
  return power_watts / thermal->b + thermal->g / thermal->b * thermal->ambient_celsius;
}

FitSample features_of(const Instance& instance, const ProcessingInterval& interval) {
  FitSample s;
  s.interval_length_ms = interval.length_ms;
  s.features.assign(interval.active.size() * kFeatureDim, 0.0);
  for (std::size_t k = 0; k < interval.active.size(); ++k) {
    for (const auto& slot : interval.active[k]) {
      if (!slot) continue;
      const TaskOnCluster& tc = instance.on(*slot, static_cast<int>(k));
      s.features[k * kFeatureDim] += tc.activity_coef;
      s.features[k * kFeatureDim + 1] += tc.offset_coef;
    }
  }
  return s;
}

}  // namespace thermosched
