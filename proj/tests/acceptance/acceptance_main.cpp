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

// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset. The exit code is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support/random_instances.hpp"
#include "thermosched/exact_search.hpp"
#include "thermosched/flow.hpp"
#include "thermosched/ga.hpp"
#include "thermosched/greedy.hpp"
#include "thermosched/instgen.hpp"
#include "thermosched/model.hpp"
#include "thermosched/power.hpp"
#include "thermosched/sweep.hpp"

namespace ts = thermosched;
namespace tt = thermosched::testing;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

const std::filesystem::path kData = THERMOSCHED_DATA_DIR;

Outcome sm_worked_window() {
  const ts::Instance inst = tt::three_task_window_instance();
  const ts::Assignment a = tt::three_task_window_assignment(inst);
  const auto start = Clock::now();
  const double watts = ts::schedule_power(inst, a, ts::PowerModel::kSM).watts;
  const double ms = ms_since(start);
  return {std::abs(watts - 8.58) <= 0.01 && ms < 1.0,
          format("%.4f W (expected 8.58 +/- 0.01), %.4f ms", watts, ms)};
}

Outcome lr_worked_window() {
  const ts::Instance inst = tt::three_task_window_instance();
  const ts::Assignment a = tt::three_task_window_assignment(inst);
  const ts::RegressionCoefficients c = ts::coefficients_preset("imx8-mek");
  const auto start = Clock::now();
  const ts::ScheduleEvaluation e = ts::evaluate_schedule(inst, a, ts::PowerModel::kLR, &c);
  const double ms = ms_since(start);
  const double expected[] = {1.92, 0.37, 0.38};
  bool ok = std::abs(e.power.watts - 8.17) <= 0.01 && e.contributions.size() == 3 && ms < 1.0;
  std::string parts;
  for (std::size_t i = 0; i < e.contributions.size(); ++i) {
    const double w = e.contributions[i].weighted_watts;
    if (i < 3) ok = ok && std::abs(w - expected[i]) <= 0.01;
    parts += format("%s%.4f", i ? " / " : "", w);
  }
  return {ok, format("%.4f W (expected 8.17), intervals %s (expected 1.92 / 0.37 / 0.38), %.4f ms",
                     e.power.watts, parts.c_str(), ms)};
}

bool same_outcome(const ts::SearchResult& a, const ts::SearchResult& b) {
  if (a.has_solution() != b.has_solution()) return false;
  if (!a.has_solution()) return true;
  return std::abs(a.objective_value - b.objective_value) <= 1e-9;
}

Outcome exact_solver_optimality() {
  std::mt19937_64 rng(3003);
  tt::RandomSpec spec;
  spec.max_tasks = 8;
  spec.max_windows = 4;
  const auto start = Clock::now();
  std::map<std::string, int> matches;
  int feasible = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const ts::Instance inst = tt::random_instance(rng, spec);
    const ts::RegressionCoefficients coef = tt::positive_coefficients(rng, inst.cluster_count());
    const ts::PartialFix none = ts::PartialFix::none(inst.task_count());
    bool any = false;
    for (const ts::ObjectiveSpec& obj :
         {ts::ObjectiveSpec{ts::ObjectiveKind::kSmPower, {}},
          ts::ObjectiveSpec{ts::ObjectiveKind::kLrUbPower, coef},
          ts::ObjectiveSpec{ts::ObjectiveKind::kIdleMin, {}},
          ts::ObjectiveSpec{ts::ObjectiveKind::kIdleMax, {}}}) {
      const ts::SearchResult got = ts::solve(inst, obj, none, 600'000);
      const ts::SearchResult want = ts::brute_force_optimum(inst, obj, none);
      const bool status_ok =
          got.status == (want.has_solution() ? ts::SearchStatus::kOptimal : ts::SearchStatus::kInfeasible);
      if (status_ok && same_outcome(got, want)) ++matches[ts::to_string(obj.kind)];
      any = any || want.has_solution();
    }
    feasible += any;
  }
  const double ms = ms_since(start);
  bool ok = ms < 60'000.0;
  std::string detail;
  for (const auto& [name, count] : matches) {
    ok = ok && count == 50;
    detail += format("%s %d/50, ", name.c_str(), count);
  }
  ok = ok && matches.size() == 4;
  return {ok, detail + format("%d feasible instances, %.0f ms", feasible, ms)};
}

Outcome flow_solver() {
  std::mt19937_64 rng(4004);
  tt::RandomSpec spec;
  spec.max_tasks = 8;
  spec.max_windows = 4;
  int agree = 0;
  int checked = 0;
  while (checked < 50) {
    const ts::Instance inst = tt::random_instance(rng, spec);
    const auto witness = tt::random_feasible_assignment(inst, rng);
    if (!witness) continue;
    ++checked;
    const auto& lengths = witness->window_lengths_ms;
    const ts::FlowSolution sol = ts::min_cost_assignment(ts::build_network(inst, lengths));
    const auto oracle = tt::brute_force_min_energy(inst, lengths);
    if (sol.feasible && oracle && std::abs(sol.total_cost - *oracle) <= 1e-9 &&
        ts::check_feasible(inst, *sol.assignment).feasible) {
      ++agree;
    }
  }
  tt::RandomSpec big;
  big.min_tasks = big.max_tasks = 60;
  big.max_windows = 30;
  big.max_cores = 4;
  big.min_tightness = big.max_tightness = 2.0;
  ts::Instance inst = tt::random_instance(rng, big);
  inst.max_windows = 30;
  const std::vector<ts::Millis> lengths(30, inst.major_frame_ms / 30);
  const auto start = Clock::now();
  const ts::FlowSolution sol = ts::min_cost_assignment(ts::build_network(inst, lengths));
  const double ms = ms_since(start);
  return {agree == 50 && ms < 1000.0,
          format("%d/50 match exhaustive minimum; n=60 q=30 solved in %.2f ms (%s)", agree, ms,
                 sol.feasible ? "feasible" : "infeasible")};
}

Outcome reconstruction_soundness() {
  std::mt19937_64 rng(5005);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int bad = 0;
  int successes = 0;
  for (int i = 0; i < 20; ++i) {
    const ts::Instance inst = tt::random_instance(rng);
    for (int g = 0; g < 1000; ++g) {
      ts::Genome genome(static_cast<std::size_t>(inst.task_count()));
      for (double& x : genome) x = unit(rng);
      const auto a = ts::reconstruct(genome, inst);
      if (!a) continue;
      ++successes;
      if (!ts::check_feasible(inst, *a).feasible) ++bad;
    }
  }
  return {bad == 0, format("%d unsound outputs of 20000 (%d feasible, rest failures)", bad, successes)};
}

Outcome greedy_completeness() {
  std::mt19937_64 rng(6006);
  tt::RandomSpec spec;
  spec.max_tasks = 6;
  spec.max_windows = 4;
  int agree = 0;
  int feasible = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const ts::Instance inst = tt::random_instance(rng, spec);
    const bool oracle = tt::any_feasible_placement(inst);
    const ts::SearchResult r = ts::greedy(inst, 60'000);
    const bool got = r.status == ts::SearchStatus::kFeasible && r.assignment &&
                     ts::check_feasible(inst, *r.assignment).feasible;
    const bool said_infeasible = r.status == ts::SearchStatus::kInfeasible;
    if (oracle ? got : said_infeasible) ++agree;
    feasible += oracle;
  }
  return {agree == 100, format("%d/100 agree (%d feasible by enumeration)", agree, feasible)};
}

Outcome ga_quality() {
  const ts::KernelPool pool = ts::load_kernel_pool(kData / "kernels-imx8-mixed.csv");
  const ts::Platform platform = ts::platform_preset("imx8-mek");
  int within = 0;
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    ts::GeneratorConfig g;
    g.n_tasks = 8;
    g.rng_seed = 7000 + static_cast<std::uint64_t>(i);
    const ts::Instance inst = ts::generate_instance(g, pool, platform);
    const ts::SearchResult exact =
        ts::solve(inst, {ts::ObjectiveKind::kSmPower, {}}, ts::PartialFix::none(8), 600'000);
    ts::GaConfig c;
    c.time_limit_ms = 10'000;
    c.rng_seed = 17 + static_cast<std::uint64_t>(i);
    const ts::GaResult ga = ts::run_ga(inst, ts::PowerModel::kSM, nullptr, c);
    if (exact.status != ts::SearchStatus::kOptimal || !ga.result.assignment) continue;
    const double gap = (ga.result.objective_value - exact.objective_value) / exact.objective_value;
    worst = std::max(worst, gap);
    if (gap <= 0.02) ++within;
  }
  return {within >= 9, format("%d/10 within 2%% of the exact optimum (worst gap %.3f%%)", within,
                              100.0 * worst)};
}

// Random feasible assignments over random instances, `count` in total.
void for_random_schedules(std::uint64_t seed, int count,
                          const std::function<void(const ts::Instance&, const ts::Assignment&,
                                                   std::mt19937_64&)>& visit) {
  std::mt19937_64 rng(seed);
  int done = 0;
  while (done < count) {
    const ts::Instance inst = tt::random_instance(rng);
    for (int k = 0; k < 10 && done < count; ++k) {
      const auto a = tt::random_feasible_assignment(inst, rng, 200);
      if (!a) break;
      visit(inst, *a, rng);
      ++done;
    }
  }
}

Outcome lr_ub_dominance() {
  int holds = 0;
  for_random_schedules(8008, 1000, [&](const ts::Instance& inst, const ts::Assignment& a,
                                       std::mt19937_64& rng) {
    const ts::RegressionCoefficients c = tt::positive_coefficients(rng, inst.cluster_count());
    const double ub = ts::schedule_power(inst, a, ts::PowerModel::kLRUB, &c).watts;
    const double lr = ts::schedule_power(inst, a, ts::PowerModel::kLR, &c).watts;
    if (ub >= lr - 1e-12) ++holds;
  });
  return {holds == 1000, format("%d/1000 schedules with LR-UB >= LR", holds)};
}

Outcome sm_aggregation_identity() {
  int holds = 0;
  double worst = 0.0;
  for_random_schedules(9009, 1000, [&](const ts::Instance& inst, const ts::Assignment& a,
                                       std::mt19937_64&) {
    const double h = static_cast<double>(inst.major_frame_ms);
    const double idle = inst.platform.idle_power_watts;
    double weighted = 0.0;
    double covered = 0.0;
    double energy = 0.0;
    double offsets = 0.0;
    for (int j = 0; j < inst.max_windows; ++j) {
      const ts::Millis l = a.window_lengths_ms[static_cast<std::size_t>(j)];
      std::vector<ts::WindowTask> tasks;
      double max_b = -INFINITY;
      for (int t = 0; t < inst.task_count(); ++t) {
        const ts::Placement& p = a.placements[static_cast<std::size_t>(t)];
        if (p.window != j) continue;
        const ts::TaskOnCluster& c = inst.on(t, p.cluster);
        tasks.push_back({p.cluster, c.exec_time_ms, c.activity_coef, c.offset_coef});
        energy += c.activity_coef * static_cast<double>(c.exec_time_ms);
        max_b = std::max(max_b, c.offset_coef);
      }
      if (l == 0) continue;
      weighted += static_cast<double>(l) / h * ts::sm_window_power(inst.platform, tasks, l).watts;
      covered += static_cast<double>(l);
      if (!tasks.empty()) offsets += static_cast<double>(l) * max_b;
    }
    weighted += (h - covered) / h * idle;
    const double linear = idle + (energy + offsets) / h;
    const double library = ts::schedule_power(inst, a, ts::PowerModel::kSM).watts;
    const double err = std::max(std::abs(weighted - linear), std::abs(library - linear));
    worst = std::max(worst, err);
    if (err <= 1e-9) ++holds;
  });
  return {holds == 1000, format("%d/1000 within 1e-9 (largest difference %.2e)", holds, worst)};
}

std::vector<ts::FitSample> synthetic_samples(std::mt19937_64& rng, const ts::Platform& platform,
                                             const ts::RegressionCoefficients& beta, int count,
                                             double sigma) {
  std::uniform_real_distribution<double> coef(0.1, 1.5);
  std::normal_distribution<double> noise(0.0, sigma);
  std::vector<ts::FitSample> samples;
  for (int s = 0; s < count; ++s) {
    ts::FitSample f;
    f.interval_length_ms = 10 + s % 90;
    double watts = platform.idle_power_watts;
    for (int k = 0; k < platform.cluster_count(); ++k) {
      const int busy = std::uniform_int_distribution<int>(
          0, platform.clusters[static_cast<std::size_t>(k)].core_count)(rng);
      double sa = 0.0;
      double sb = 0.0;
      for (int r = 0; r < busy; ++r) {
        sa += coef(rng);
        sb += coef(rng);
      }
      f.features.push_back(sa);
      f.features.push_back(sb);
      watts += beta.weight(k, sa, sb);
    }
    f.measured_power_watts = watts + (sigma > 0.0 ? noise(rng) : 0.0);
    samples.push_back(std::move(f));
  }
  return samples;
}

Outcome regression_recovery() {
  std::mt19937_64 rng(10010);
  const ts::Platform platform = ts::platform_preset("imx8-mek");
  const ts::RegressionCoefficients truth = ts::coefficients_preset("imx8-mek");
  const auto clean = synthetic_samples(rng, platform, truth, 200, 0.0);
  const ts::RegressionCoefficients fit = ts::fit_regression_coefficients(clean, platform);
  double err = 0.0;
  for (std::size_t k = 0; k < truth.beta.size(); ++k) {
    for (std::size_t d = 0; d < truth.beta[k].size(); ++d) {
      err = std::max(err, std::abs(fit.beta[k][d] - truth.beta[k][d]));
    }
  }
  const double r2_clean = fit.r_squared.value_or(0.0);
  const auto noisy = synthetic_samples(rng, platform, truth, 1000, 0.1);
  const double r2_noisy =
      ts::fit_regression_coefficients(noisy, platform).r_squared.value_or(0.0);
  return {err <= 1e-6 && std::abs(r2_clean - 1.0) <= 1e-12 && r2_noisy > 0.95,
          format("noise-free max |beta error| %.2e, R^2 %.12f; sigma 0.1 W over 1000 samples R^2 %.4f",
                 err, r2_clean, r2_noisy)};
}

Outcome idle_identity() {
  int holds = 0;
  for_random_schedules(11011, 1000, [&](const ts::Instance& inst, const ts::Assignment& a,
                                        std::mt19937_64&) {
    const ts::CoreSchedule s = ts::derive_core_schedule(inst, a);
    ts::Millis walked = 0;
    ts::Millis used = 0;
    for (int j = 0; j < inst.max_windows; ++j) {
      const ts::Millis l = a.window_lengths_ms[static_cast<std::size_t>(j)];
      used += l;
      for (int k = 0; k < inst.cluster_count(); ++k) {
        for (const auto& slot : s.at(j, k)) {
          walked += slot ? l - inst.on(*slot, k).exec_time_ms : l;
        }
      }
    }
    walked += (inst.major_frame_ms - used) * inst.platform.total_cores();
    const ts::Millis closed = inst.major_frame_ms * inst.platform.total_cores() -
                              ts::total_processing_time(inst, a.placements);
    if (walked == closed && ts::total_idle_time(inst, a) == closed) ++holds;
  });
  return {holds == 1000, format("%d/1000 exact", holds)};
}

Outcome scalability_ordering() {
  int reps = 2;
  if (const char* env = std::getenv("THERMOSCHED_ACCEPTANCE_REPS")) reps = std::max(1, std::atoi(env));
  ts::SweepConfig c;
  for (int n = 5; n <= 40; n += 5) c.sizes.push_back(n);
  c.repetitions = reps;
  c.methods = {ts::Method::kIlpSm, ts::Method::kHeur, ts::Method::kIdleMax};
  c.time_limit_ms = 60'000;
  c.seed = 12012;
  c.platform = ts::platform_preset("imx8-mek");
  c.pool = ts::load_kernel_pool(kData / "kernels-imx8-mixed.csv");
  const auto summary = ts::summarize(ts::scalability_sweep(c));
  std::map<int, std::map<std::string, double>> mean;
  for (const auto& row : summary) mean[row.n][row.method] = row.mean_elapsed_ms;
  bool ok = true;
  std::string detail = format("%d rep(s); mean ms ilp-sm/heur/idle-max:", reps);
  for (const auto& [n, by] : mean) {
    const double ilp = by.at("ilp-sm");
    const double heur = by.at("heur");
    const double idle = by.at("idle-max");
    const bool ordered = ilp > heur && heur > idle;
    if (n >= 20) ok = ok && ordered;
    detail += format(" n=%d %.1f/%.1f/%.1f%s", n, ilp, heur, idle,
                     n >= 20 && !ordered ? "(out of order)" : "");
  }
  return {ok, detail};
}

struct Criterion {
  int id;
  const char* name;
  Outcome (*check)();
};

const Criterion kCriteria[] = {
    {1, "SM power of the three-task window", sm_worked_window},
    {2, "LR power and interval contributions of the three-task window", lr_worked_window},
    {3, "exact solver matches exhaustive search", exact_solver_optimality},
    {4, "min-cost flow correctness and speed", flow_solver},
    {5, "genome reconstruction soundness", reconstruction_soundness},
    {6, "greedy completeness", greedy_completeness},
    {7, "genetic search quality under a 10 s budget", ga_quality},
    {8, "LR-UB dominates LR", lr_ub_dominance},
    {9, "SM weighted average equals the linearized form", sm_aggregation_identity},
    {10, "regression fitter recovery", regression_recovery},
    {11, "idle time identity", idle_identity},
    {12, "scalability ordering ilp-sm > heur > idle-max for n >= 20", scalability_ordering},
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  int failures = 0;
  for (const Criterion& c : kCriteria) {
    if (!wanted.empty() && !wanted.contains(c.id)) continue;
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s [%2d] %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), ms_since(start) / 1000.0);
    std::fflush(stdout);
  }
  return failures;
}
