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

#include "thermosched/sweep.hpp"

#include <ostream>
#include <sstream>

namespace thermosched {

std::uint64_t sweep_instance_seed(std::uint64_t seed, int n, int rep) {
  std::uint64_t x = seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(n) * 1000003ULL +
                    static_cast<std::uint64_t>(rep);
  x ^= x >> 31;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  return x;
}

std::vector<SweepRow> scalability_sweep(const SweepConfig& config,
                                        const std::function<void(const SweepRow&)>& progress) {
  if (config.repetitions < 1) throw InputError("repetitions must be positive");
  std::vector<SweepRow> rows;
  for (int n : config.sizes) {
    for (int rep = 0; rep < config.repetitions; ++rep) {
      GeneratorConfig gen = config.generator;
      gen.n_tasks = n;
      gen.rng_seed = sweep_instance_seed(config.seed, n, rep);
      const Instance inst = generate_instance(gen, config.pool, config.platform);

      MethodOptions options;
      options.time_limit_ms = config.time_limit_ms;
      options.seed = gen.rng_seed;
      options.coefficients = config.coefficients;
      std::optional<std::vector<Millis>> reference_lengths;

      for (Method method : config.methods) {
        SweepRow row;
        row.n = n;
        row.method = to_string(method);
        row.rep = rep;
        if (needs_coefficients(method) && !config.coefficients) {
          throw InputError(row.method + " needs regression coefficients");
        }
        if (method == Method::kFlowFixed) {
          if (!reference_lengths) {
            const MethodRun ref = run_method(inst, config.flow_reference, options);
            if (ref.result.assignment) {
              reference_lengths = ref.result.assignment->window_lengths_ms;
            }
          }
          if (!reference_lengths) continue;
          options.window_lengths_ms = reference_lengths;
        }
        const MethodRun run = run_method(inst, method, options);
        if (method == config.flow_reference && run.result.assignment && !reference_lengths) {
          reference_lengths = run.result.assignment->window_lengths_ms;
        }
        row.status = to_string(run.result.status);
        row.elapsed_ms = run.result.elapsed_ms;
        row.objective = run.result.objective_value;
        row.bound = run.result.lower_bound;
        rows.push_back(row);
        if (progress) progress(row);
      }
    }
  }
  return rows;
}

std::vector<SweepSummaryRow> summarize(const std::vector<SweepRow>& rows) {
  std::vector<SweepSummaryRow> out;
  std::map<std::pair<int, std::string>, std::size_t> index;
  for (const SweepRow& r : rows) {
    auto [it, inserted] = index.emplace(std::pair{r.n, r.method}, out.size());
    if (inserted) out.push_back(SweepSummaryRow{r.n, r.method, 0, 0.0, {}});
    SweepSummaryRow& s = out[it->second];
    ++s.runs;
    s.mean_elapsed_ms += r.elapsed_ms;
    ++s.status_counts[r.status];
  }
  for (SweepSummaryRow& s : out) s.mean_elapsed_ms /= s.runs;
  return out;
}

namespace {

std::string number(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "n,method,rep,status,elapsed_ms,objective,bound\n";
  for (const SweepRow& r : rows) {
    out << r.n << ',' << r.method << ',' << r.rep << ',' << r.status << ','
        << number(r.elapsed_ms) << ',' << number(r.objective) << ',' << number(r.bound)
        << '\n';
  }
}

void write_summary_csv(const std::vector<SweepSummaryRow>& rows, std::ostream& out) {
  static const char* kStatuses[] = {"optimal", "feasible", "feasible_timeout", "infeasible",
                                    "unknown_timeout"};
  out << "n,method,runs,mean_elapsed_ms";
  for (const char* s : kStatuses) out << ',' << s;
  out << '\n';
  for (const SweepSummaryRow& r : rows) {
    out << r.n << ',' << r.method << ',' << r.runs << ',' << number(r.mean_elapsed_ms);
    for (const char* s : kStatuses) {
      auto it = r.status_counts.find(s);
      out << ',' << (it == r.status_counts.end() ? 0 : it->second);
    }
    out << '\n';
  }
}

}  // namespace thermosched
