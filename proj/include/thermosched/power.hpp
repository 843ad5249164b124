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

// Average-power predictors for windowed schedules.
//
// SM (sum-max): a window's power is P_idle plus the occupancy-weighted activity
// coefficients of its tasks plus the largest offset coefficient among them.
//
// LR (linear regression): a window is cut into processing-idling intervals in
// which every core either runs one task or idles throughout. Each interval's
// power is P_idle + sum_k beta_k . (sum of the feature vectors (a, b) of the
// tasks running on cluster k).
//
// LR-UB: LR with every task stretched to the full window, which turns each
// window into a single interval.
//
// Schedule power is the length-weighted average over the major frame; frame
// time not covered by windows idles.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "thermosched/model.hpp"

namespace thermosched {

inline constexpr int kFeatureDim = 2;  // (activity, offset)

// beta[k] pairs with the feature vector (a_ik, b_ik) of tasks on cluster k.
struct RegressionCoefficients {
  std::vector<std::vector<double>> beta;
  std::optional<double> r_squared;

  // a * beta_{1,k} + b * beta_{2,k}
  double weight(int cluster, double activity, double offset) const;
  void require_compatible(const Platform& platform) const;

  bool operator==(const RegressionCoefficients&) const = default;
};

// watts == idle + activity + offset.
struct PowerEstimate {
  double watts = 0.0;
  double idle = 0.0;
  double activity = 0.0;
  double offset = 0.0;
};

enum class PowerModel { kSM, kLR, kLRUB };

const char* to_string(PowerModel model);
std::optional<PowerModel> parse_power_model(const std::string& text);

// One task as seen by a window-level predictor.
struct WindowTask {
  int cluster = 0;  // zero-based
  Millis exec_time_ms = 0;
  double activity_coef = 0.0;
  double offset_coef = 0.0;
};

// Throws InputError when a task is longer than the window. An empty window
// predicts exactly P_idle.
PowerEstimate sm_window_power(const Platform& platform,
                              std::span<const WindowTask> tasks,
                              Millis window_length_ms);

PowerEstimate lr_ub_window_power(const Platform& platform,
                                 const RegressionCoefficients& coefficients,
                                 std::span<const WindowTask> tasks,
                                 Millis window_length_ms);

struct ProcessingInterval {
  Millis length_ms = 0;
  // active[cluster][core]: zero-based task index or nullopt when idle.
  std::vector<std::vector<std::optional<int>>> active;
};

// Splits window `window` (zero-based) at every distinct task end time. All
// tasks start at the window start. Lengths sum to the stored window length.
std::vector<ProcessingInterval> decompose_intervals(const Instance& instance,
                                                    const Assignment& assignment,
                                                    int window);

// Interval power, not weighted by the interval length.
PowerEstimate lr_interval_power(const Instance& instance,
                                const RegressionCoefficients& coefficients,
                                const ProcessingInterval& interval);

// One length-weighted contribution to schedule power: the window (SM, LR-UB)
// or interval (LR) above-idle power times its length, divided by h.
struct PowerContribution {
  int window = 0;
  Millis start_ms = 0;  // offset within the window
  Millis length_ms = 0;
  double above_idle_watts = 0.0;  // unweighted
  double weighted_watts = 0.0;    // above_idle_watts * length / h
};

struct ScheduleEvaluation {
  PowerEstimate power;
  std::vector<PowerContribution> contributions;
};

// `coefficients` is required for LR and LR-UB.
ScheduleEvaluation evaluate_schedule(const Instance& instance,
                                     const Assignment& assignment,
                                     PowerModel model,
                                     const RegressionCoefficients* coefficients = nullptr);

PowerEstimate schedule_power(const Instance& instance,
                             const Assignment& assignment, PowerModel model,
                             const RegressionCoefficients* coefficients = nullptr);

// Steady-state temperature in degrees Celsius. Throws InputError when the
// platform lacks thermal parameters.
double power_to_temperature(const Platform& platform, double power_watts);

// One measured interval: per-cluster summed feature vectors, flattened as
// [sum_a_k1, sum_b_k1, sum_a_k2, sum_b_k2, ...].
struct FitSample {
  Millis interval_length_ms = 0;
  double measured_power_watts = 0.0;
  std::vector<double> features;
};

// Sums the feature vectors of an interval's running tasks per cluster.
FitSample features_of(const Instance& instance, const ProcessingInterval& interval);

class RankDeficientError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ordinary least squares of (measured - P_idle) on the summed features with
// P_idle held fixed. Reports R^2 of the full prediction against the
// measurements.
RegressionCoefficients fit_regression_coefficients(
    std::span<const FitSample> samples, const Platform& platform);

}  // namespace thermosched
