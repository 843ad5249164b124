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

#include "thermosched/instgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>

#include "thermosched/io.hpp"

namespace thermosched {

double Kernel::relative_speedup(int big_cluster, int other_cluster) const {
  const KernelOnCluster& big = per_cluster.at(static_cast<std::size_t>(big_cluster));
  const KernelOnCluster& other = per_cluster.at(static_cast<std::size_t>(other_cluster));
  return (big.ips * big.frequency_mhz) / (other.ips * other.frequency_mhz);
}

KernelPool load_kernel_pool(std::istream& in) {
  const CsvTable t = read_csv(in, "kernel pool");
  const std::size_t c_kernel = t.column("kernel");
  const std::size_t c_cluster = t.column("cluster_id");
  const std::size_t c_a = t.column("activity_coef");
  const std::size_t c_b = t.column("offset_coef");
  const std::size_t c_ips = t.column("ips");
  const std::size_t c_freq = t.column("frequency_mhz");

  struct Rows {
    std::map<int, KernelOnCluster> by_cluster;
  };
  std::vector<std::string> order;
  std::map<std::string, Rows> rows;
  int m = 0;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const std::string& name = t.rows[r][c_kernel];
    const std::string where = "line " + std::to_string(t.line_numbers[r]);
    if (name.empty()) throw ParseError(where, "empty kernel name");
    const long long cid = csv_int(t, r, c_cluster);
    if (cid < 1) throw ParseError(where, "cluster_id must be at least 1");
    KernelOnCluster kc;
    kc.activity_coef = csv_double(t, r, c_a);
    kc.offset_coef = csv_double(t, r, c_b);
    kc.ips = csv_double(t, r, c_ips);
    kc.frequency_mhz = static_cast<int>(csv_int(t, r, c_freq));
    if (!(kc.ips > 0.0)) throw ParseError(where, "ips must be positive");
    if (kc.frequency_mhz <= 0) throw ParseError(where, "frequency_mhz must be positive");
    if (!rows.contains(name)) order.push_back(name);
    if (!rows[name].by_cluster.emplace(static_cast<int>(cid), kc).second) {
      throw ParseError(where, "kernel '" + name + "' repeats cluster " + std::to_string(cid));
    }
    m = std::max(m, static_cast<int>(cid));
  }
  if (order.empty()) throw ParseError("kernel pool", "no kernels");

  KernelPool pool;
  for (const std::string& name : order) {
    const auto& by_cluster = rows[name].by_cluster;
    Kernel k;
    k.name = name;
    for (int c = 1; c <= m; ++c) {
      auto it = by_cluster.find(c);
      if (it == by_cluster.end()) {
        throw ParseError("kernel pool", "kernel '" + name + "' has no row for cluster " +
                                            std::to_string(c));
      }
      k.per_cluster.push_back(it->second);
    }
    pool.push_back(std::move(k));
  }
  return pool;
}

KernelPool load_kernel_pool(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), "cannot open file");
  return load_kernel_pool(in);
}

void GeneratorConfig::validate() const {
  if (n_tasks < 1) throw InputError("n_tasks must be positive");
  if (big_exec_min_ms < 1) throw InputError("big_exec_min_ms must be positive");
  if (big_exec_min_ms > big_exec_max_ms) {
    throw InputError("big_exec_min_ms exceeds big_exec_max_ms");
  }
  if (!(tightness_kappa > 0.0)) throw InputError("tightness_kappa must be positive");
}

int designated_big_cluster(const Platform& platform, const GeneratorConfig& config) {
  const int m = platform.cluster_count();
  if (m == 0) throw InputError("platform has no clusters");
  if (config.big_cluster) {
    if (*config.big_cluster < 0 || *config.big_cluster >= m) {
      throw InputError("big cluster index out of range");
    }
    return *config.big_cluster;
  }
  int best = 0;
  for (int k = 1; k < m; ++k) {
    if (platform.clusters[static_cast<std::size_t>(k)].frequency_mhz >=
        platform.clusters[static_cast<std::size_t>(best)].frequency_mhz) {
      best = k;
    }
  }
  return best;
}

Instance generate_instance(const GeneratorConfig& config, const KernelPool& pool,
                           const Platform& platform) {
  config.validate();
  if (pool.empty()) throw InputError("kernel pool is empty");
  const int m = platform.cluster_count();
  for (const Kernel& k : pool) {
    if (static_cast<int>(k.per_cluster.size()) != m) {
      throw InputError("kernel '" + k.name + "' describes " +
                       std::to_string(k.per_cluster.size()) + " clusters; platform has " +
                       std::to_string(m));
    }
  }
  const int big = designated_big_cluster(platform, config);

  std::mt19937_64 rng(config.rng_seed);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<Millis> exec(config.big_exec_min_ms, config.big_exec_max_ms);

  Instance inst;
  inst.platform = platform;
  double sum_exec = 0.0;
  Millis fits = 0;
  for (int i = 0; i < config.n_tasks; ++i) {
    const Kernel& kernel = pool[pick(rng)];
    const Millis big_time = exec(rng);
    Task task;
    task.id = i + 1;
    task.name = kernel.name;
    Millis shortest = big_time;
    for (int k = 0; k < m; ++k) {
      const KernelOnCluster& kc = kernel.per_cluster[static_cast<std::size_t>(k)];
      TaskOnCluster tc;
      tc.activity_coef = kc.activity_coef;
      tc.offset_coef = kc.offset_coef;
      if (k == big) {
        tc.exec_time_ms = big_time;
      } else {
        const double ratio = kernel.per_cluster[static_cast<std::size_t>(big)].ips / kc.ips;
        tc.exec_time_ms =
            std::max<Millis>(1, std::llround(static_cast<double>(big_time) * ratio));
      }
      shortest = std::min(shortest, tc.exec_time_ms);
      sum_exec += static_cast<double>(tc.exec_time_ms);
      task.per_cluster.push_back(tc);
    }
    fits = std::max(fits, shortest);
    inst.tasks.push_back(std::move(task));
  }
  const double mean_exec = sum_exec / (static_cast<double>(config.n_tasks) * m);
  inst.major_frame_ms = std::max<Millis>(
      fits, std::llround(config.n_tasks * mean_exec / config.tightness_kappa));
  inst.max_windows = config.n_tasks;
  return inst;
}

namespace {

Platform imx8(double idle) {
  Platform p;
  p.clusters = {Cluster{1, 4, "A53", 1200}, Cluster{2, 2, "A72", 1600}};
  p.idle_power_watts = idle;
  return p;
}

RegressionCoefficients two_cluster(double a1, double b1, double a2, double b2, double r2) {
  RegressionCoefficients c;
  c.beta = {{a1, b1}, {a2, b2}};
  c.r_squared = r2;
  return c;
}

}  // namespace

std::vector<std::string> preset_names() { return {"imx8-mek", "imx8-ixora", "tx2"}; }

Platform platform_preset(const std::string& name) {
  if (name == "imx8-mek") return imx8(5.5);
  if (name == "imx8-ixora") return imx8(5.5);
  if (name == "tx2") {
    Platform p;
    p.clusters = {Cluster{1, 4, "A57", 2035}, Cluster{2, 2, "Denver", 2035}};
    p.idle_power_watts = 2.6;
    return p;
  }
  throw InputError("unknown platform preset '" + name + "'");
}

RegressionCoefficients coefficients_preset(const std::string& name) {
  if (name == "imx8-mek") return two_cluster(1.205, 0.270, 0.969, 0.456, 0.822);
  if (name == "imx8-ixora") return two_cluster(1.227, 0.232, 0.981, 0.420, 0.814);
  if (name == "tx2") return two_cluster(0.857, 0.648, 0.946, 0.801, 0.974);
  throw InputError("unknown coefficient preset '" + name + "'");
}

}  // namespace thermosched
