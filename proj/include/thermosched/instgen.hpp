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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "thermosched/model.hpp"
#include "thermosched/power.hpp"

namespace thermosched {

struct KernelOnCluster {
  double activity_coef = 0.0;
  double offset_coef = 0.0;
  double ips = 1.0;  // iterations per second when run on this cluster
  int frequency_mhz = 0;
};

struct Kernel {
  std::string name;
  std::vector<KernelOnCluster> per_cluster;  // zero-based cluster index

  // (IPS_big * f_big) / (IPS_other * f_other).
  double relative_speedup(int big_cluster, int other_cluster) const;
};

using KernelPool = std::vector<Kernel>;

// CSV `kernel,cluster_id,activity_coef,offset_coef,ips,frequency_mhz`.
// Every kernel must have exactly one row per cluster 1..m, where m is the
// largest cluster id in the file. Throws ParseError naming the kernel.
KernelPool load_kernel_pool(std::istream& in);
KernelPool load_kernel_pool(const std::filesystem::path& path);

struct GeneratorConfig {
  int n_tasks = 20;
  Millis big_exec_min_ms = 40;
  Millis big_exec_max_ms = 160;
  double tightness_kappa = 3.5;
  // Zero-based. Defaults to the highest-frequency cluster (the last one on a
  // tie).
  std::optional<int> big_cluster;
  std::uint64_t rng_seed = 1;

  void validate() const;
};

int designated_big_cluster(const Platform& platform, const GeneratorConfig& config);

// Each task draws a kernel and a big-cluster execution time uniformly. Other
// clusters run the same work, so their times scale by IPS_big / IPS_k
// (rounded, at least 1 ms). The major frame is round(n * mean_e / kappa),
// raised if needed so that every task fits on its fastest cluster; there are
// n windows.
Instance generate_instance(const GeneratorConfig& config, const KernelPool& pool,
                           const Platform& platform);

// Preset platforms: "imx8-mek", "imx8-ixora", "tx2".
Platform platform_preset(const std::string& name);
// Preset regression coefficients for the same names.
RegressionCoefficients coefficients_preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace thermosched
