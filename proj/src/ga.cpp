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

#include "thermosched/ga.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace thermosched {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTopGene = 1.0 - 1e-12;

}  // namespace

GenePreference decode_gene(double x, int cluster_count, int window_count) {
  x = std::clamp(x, 0.0, kTopGene);
  const double scaled = x * cluster_count;
  const double slice = std::floor(scaled);
  GenePreference g;
  g.cluster = std::min(static_cast<int>(slice), cluster_count - 1);
  g.preference = std::clamp((scaled - slice) * window_count, 0.0,
                            std::nextafter(static_cast<double>(window_count), 0.0));
  g.window = std::min(static_cast<int>(std::floor(g.preference)), window_count - 1);
  return g;
}

std::vector<GenePreference> decode(const Genome& genome, const Instance& instance) {
  if (static_cast<int>(genome.size()) != instance.task_count()) {
    throw InputError("genome has " + std::to_string(genome.size()) + " genes; instance has " +
                     std::to_string(instance.task_count()) + " tasks");
  }
  std::vector<GenePreference> out;
  out.reserve(genome.size());
  for (double x : genome) {
    out.push_back(decode_gene(x, instance.cluster_count(), instance.max_windows));
  }
  return out;
}

std::optional<Assignment> reconstruct(const Genome& genome, const Instance& instance) {
  return reconstruct_detailed(genome, instance).assignment;
}

Reconstruction reconstruct_detailed(const Genome& genome, const Instance& instance) {
  std::vector<GenePreference> pref = decode(genome, instance);
  const int n = instance.task_count();
  const int m = instance.cluster_count();
  const int q = instance.max_windows;

  std::vector<int> capacity(static_cast<std::size_t>(q * m));
  for (int j = 0; j < q; ++j) {
    for (int k = 0; k < m; ++k) capacity[static_cast<std::size_t>(j * m + k)] = instance.cores(k);
  }
  std::vector<Millis> length(static_cast<std::size_t>(q), 0);
  std::vector<bool> assigned(static_cast<std::size_t>(n), false);
  std::vector<Placement> placements(static_cast<std::size_t>(n));
  std::vector<int> waiting;

  for (int iteration = 0; iteration < 2 * q; ++iteration) {
    const int window = iteration % q;
    waiting.clear();
    for (int i = 0; i < n; ++i) {
      if (!assigned[static_cast<std::size_t>(i)] && pref[static_cast<std::size_t>(i)].window == window) {
        waiting.push_back(i);
      }
    }
    std::stable_sort(waiting.begin(), waiting.end(), [&](int a, int b) {
      return pref[static_cast<std::size_t>(a)].preference <
             pref[static_cast<std::size_t>(b)].preference;
    });
    for (int i : waiting) {
      GenePreference& g = pref[static_cast<std::size_t>(i)];
      int& free = capacity[static_cast<std::size_t>(window * m + g.cluster)];
      if (free > 0) {
        --free;
        assigned[static_cast<std::size_t>(i)] = true;
        placements[static_cast<std::size_t>(i)] = Placement{window, g.cluster};
        length[static_cast<std::size_t>(window)] =
            std::max(length[static_cast<std::size_t>(window)], instance.on(i, g.cluster).exec_time_ms);
      } else {
        g.window = (window + 1) % q;
        g.preference = 0.0;
      }
    }
  }

  Reconstruction out;
  out.unassigned = static_cast<int>(std::count(assigned.begin(), assigned.end(), false));
  out.frame_excess_ms = std::max<Millis>(
      0, std::accumulate(length.begin(), length.end(), Millis{0}) - instance.major_frame_ms);
  if (out.unassigned == 0 && out.frame_excess_ms == 0) {
    out.assignment = Assignment{std::move(placements), std::move(length)};
  }
  return out;
}

int GaConfig::effective_population(int task_count) const {
  return population_size ? *population_size : std::max(2, 50 * task_count);
}

void GaConfig::validate() const {
  auto rate = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InputError(std::string(name) + " must lie in [0, 1]");
    }
  };
  rate(crossover_rate, "crossover_rate");
  rate(mutation_rate, "mutation_rate");
  if (!(elite_discard_fraction >= 0.0 && elite_discard_fraction < 1.0)) {
    throw InputError("elite_discard_fraction must lie in [0, 1)");
  }
  if (population_size && *population_size < 2) {
    throw InputError("population_size must be at least 2");
  }
  if (time_limit_ms < 1) throw InputError("time_limit_ms must be at least 1");
  if (!(bga_mutation_range > 0.0)) throw InputError("bga_mutation_range must be positive");
  if (bga_precision_bits < 1 || bga_precision_bits > 52) {
    throw InputError("bga_precision_bits must lie in [1, 52]");
  }
  if (stall_generations < 1) throw InputError("stall_generations must be at least 1");
  if (generation_budget && *generation_budget < 1) {
    throw InputError("generation_budget must be at least 1");
  }
}

GaConfig ga_config_from_json(const nlohmann::json& doc, GaConfig base) {
  if (!doc.is_object()) throw InputError("GA configuration must be a JSON object");
  auto number = [&](const char* key, auto& field) {
    auto it = doc.find(key);
    if (it == doc.end() || it->is_null()) return;
    if (!it->is_number()) throw InputError(std::string("GA configuration field '") + key +
                                           "' must be a number");
    field = it->get<std::remove_reference_t<decltype(field)>>();
  };
  number("crossover_rate", base.crossover_rate);
  number("mutation_rate", base.mutation_rate);
  number("elite_discard_fraction", base.elite_discard_fraction);
  number("time_limit_ms", base.time_limit_ms);
  number("rng_seed", base.rng_seed);
  number("bga_mutation_range", base.bga_mutation_range);
  number("bga_precision_bits", base.bga_precision_bits);
  number("stall_generations", base.stall_generations);
  if (auto it = doc.find("population_size"); it != doc.end() && !it->is_null()) {
    int v = 0;
    number("population_size", v);
    base.population_size = v;
  }
  if (auto it = doc.find("generation_budget"); it != doc.end() && !it->is_null()) {
    std::int64_t v = 0;
    number("generation_budget", v);
    base.generation_budget = v;
  }
  base.validate();
  return base;
}

nlohmann::json ga_config_to_json(const GaConfig& c) {
  nlohmann::json doc = {{"crossover_rate", c.crossover_rate},
                        {"mutation_rate", c.mutation_rate},
                        {"elite_discard_fraction", c.elite_discard_fraction},
                        {"time_limit_ms", c.time_limit_ms},
                        {"rng_seed", c.rng_seed},
                        {"bga_mutation_range", c.bga_mutation_range},
                        {"bga_precision_bits", c.bga_precision_bits},
                        {"stall_generations", c.stall_generations}};
  doc["population_size"] = c.population_size ? nlohmann::json(*c.population_size) : nullptr;
  doc["generation_budget"] =
      c.generation_budget ? nlohmann::json(*c.generation_budget) : nullptr;
  return doc;
}

namespace {

struct Individual {
  Genome genome;
  double fitness = kInf;
  // Ranks failed reconstructions; 0 on success.
  std::pair<int, Millis> shortfall{0, 0};
  std::optional<Assignment> assignment;
};

class Evolution {
 public:
  Evolution(const Instance& instance, PowerModel model,
            const RegressionCoefficients* coefficients, const GaConfig& config)
      : instance_(instance),
        model_(model),
        coefficients_(coefficients),
        config_(config),
        rng_(config.rng_seed),
        population_size_(config.effective_population(instance.task_count())) {}

  GaResult run() {
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    const auto deadline = start + std::chrono::milliseconds(config_.time_limit_ms);
    auto out_of_budget = [&](std::int64_t generation) {
      if (config_.generation_budget && generation >= *config_.generation_budget) return true;
      return Clock::now() >= deadline;
    };

    GaResult out;
    std::optional<Individual> best;
    std::int64_t generation = 0;
    int restart = 0;
    while (true) {
      std::vector<Individual> population = random_population();
      double segment_best = kInf;
      std::pair<int, Millis> segment_shortfall{instance_.task_count() + 1, 0};
      int stall = 0;
      bool stop = false;
      while (stall < config_.stall_generations) {
        rank(population);
        const Individual& top = population.front();
        if (top.fitness < segment_best ||
            (top.fitness == kInf && top.shortfall < segment_shortfall)) {
          segment_best = top.fitness;
          segment_shortfall = top.shortfall;
          stall = 0;
        } else {
          ++stall;
        }
        if (population.front().fitness < kInf &&
            (!best || population.front().fitness < best->fitness)) {
          best = population.front();
        }
        out.trace.push_back({generation, restart, segment_best});
        ++generation;
        if (out_of_budget(generation)) {
          stop = true;
          break;
        }
        population = next_generation(population);
      }
      if (stop) break;
      ++restart;
    }

    out.restarts = restart;
    out.evaluations = evaluations_;
    SearchResult& r = out.result;
    r.nodes_explored = evaluations_;
    r.lower_bound = -kInf;
    if (best) {
      r.status = SearchStatus::kFeasible;
      r.assignment = best->assignment;
      r.objective_value = best->fitness;
    } else {
      r.status = SearchStatus::kInfeasible;
      r.objective_value = kInf;
    }
    r.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return out;
  }

 private:
  void evaluate(Individual& ind) {
    ++evaluations_;
    Reconstruction r = reconstruct_detailed(ind.genome, instance_);
    ind.assignment = std::move(r.assignment);
    ind.shortfall = {r.unassigned, r.frame_excess_ms};
    ind.fitness = ind.assignment
                      ? schedule_power(instance_, *ind.assignment, model_, coefficients_).watts
                      : kInf;
  }

  std::vector<Individual> random_population() {
    std::uniform_real_distribution<double> gene(0.0, 1.0);
    std::vector<Individual> pop(static_cast<std::size_t>(population_size_));
    for (Individual& ind : pop) {
      ind.genome.resize(static_cast<std::size_t>(instance_.task_count()));
      for (double& x : ind.genome) x = std::min(gene(rng_), kTopGene);
      evaluate(ind);
    }
    return pop;
  }

  static void rank(std::vector<Individual>& pop) {
    std::stable_sort(pop.begin(), pop.end(), [](const Individual& a, const Individual& b) {
      if (a.fitness != b.fitness) return a.fitness < b.fitness;
      return a.shortfall < b.shortfall;
    });
  }

  // Expects `pop` ranked best first. The best individual survives unchanged.
  std::vector<Individual> next_generation(const std::vector<Individual>& pop) {
    const int size = static_cast<int>(pop.size());
    const int kept = std::clamp(
        static_cast<int>(std::ceil((1.0 - config_.elite_discard_fraction) * size)), 1, size);
    std::uniform_int_distribution<int> parent(0, kept - 1);
    std::bernoulli_distribution crossover(config_.crossover_rate);
    std::bernoulli_distribution mutate(config_.mutation_rate);

    std::vector<Individual> next;
    next.reserve(pop.size());
    next.push_back(pop.front());
    while (static_cast<int>(next.size()) < size) {
      Genome a = pop[static_cast<std::size_t>(parent(rng_))].genome;
      Genome b = pop[static_cast<std::size_t>(parent(rng_))].genome;
      if (crossover(rng_)) two_point_crossover(a, b);
      for (Genome* child : {&a, &b}) {
        if (static_cast<int>(next.size()) >= size) break;
        if (mutate(rng_)) bga_mutation(*child);
        Individual ind;
        ind.genome = std::move(*child);
        evaluate(ind);
        next.push_back(std::move(ind));
      }
    }
    return next;
  }

  void two_point_crossover(Genome& a, Genome& b) {
    const int n = static_cast<int>(a.size());
    if (n < 2) return;
    std::uniform_int_distribution<int> cut(0, n);
    int lo = cut(rng_);
    int hi = cut(rng_);
    if (lo > hi) std::swap(lo, hi);
    for (int i = lo; i < hi; ++i) {
      std::swap(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(i)]);
    }
  }

  void bga_mutation(Genome& g) {
    const std::size_t n = g.size();
    std::bernoulli_distribution pick_gene(1.0 / static_cast<double>(n));
    std::bernoulli_distribution bit(1.0 / config_.bga_precision_bits);
    std::bernoulli_distribution sign(0.5);
    for (double& x : g) {
      if (!pick_gene(rng_)) continue;
      double delta = 0.0;
      for (int i = 0; i < config_.bga_precision_bits; ++i) {
        if (bit(rng_)) delta += std::ldexp(1.0, -i);
      }
      delta *= config_.bga_mutation_range;
      x = std::clamp(sign(rng_) ? x + delta : x - delta, 0.0, kTopGene);
    }
  }

  const Instance& instance_;
  PowerModel model_;
  const RegressionCoefficients* coefficients_;
  const GaConfig& config_;
  std::mt19937_64 rng_;
  int population_size_;
  std::int64_t evaluations_ = 0;
};

}  // namespace

GaResult run_ga(const Instance& instance, PowerModel model,
                const RegressionCoefficients* coefficients, const GaConfig& config) {
  config.validate();
  if (model == PowerModel::kLRUB) {
    throw InputError("the genetic search evaluates SM or LR fitness");
  }
  if (model == PowerModel::kLR) {
    if (coefficients == nullptr) throw InputError("LR fitness needs regression coefficients");
    coefficients->require_compatible(instance.platform);
  }
  if (instance.task_count() == 0) {
    GaResult out;
    out.result.status = SearchStatus::kFeasible;
    out.result.assignment = make_assignment(instance, {});
    out.result.objective_value =
        schedule_power(instance, *out.result.assignment, model, coefficients).watts;
    out.result.lower_bound = out.result.objective_value;
    return out;
  }
  return Evolution(instance, model, coefficients, config).run();
}

void write_fitness_trace(const std::vector<GaTracePoint>& trace, std::ostream& out) {
  out << "generation,restart,best_fitness\n";
  std::ostringstream row;
  row.precision(17);
  for (const GaTracePoint& p : trace) {
    row.str("");
    row << p.generation << ',' << p.restart << ',';
    if (std::isinf(p.best_fitness)) {
      row << "inf";
    } else {
      row << p.best_fitness;
    }
    out << row.str() << '\n';
  }
}

}  // namespace thermosched
