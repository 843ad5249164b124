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

#include <Eigen/Dense>
#include <sstream>

#include "thermosched/power.hpp"

namespace thermosched {

RegressionCoefficients fit_regression_coefficients(
    std::span<const FitSample> samples, const Platform& platform) {
  const int m = platform.cluster_count();
  const Eigen::Index cols = m * kFeatureDim;
  const auto rows = static_cast<Eigen::Index>(samples.size());
  if (rows < 2 * cols) {
    std::ostringstream os;
    os << "need at least " << 2 * cols << " samples to fit " << cols
       << " coefficients; got " << rows;
    throw InputError(os.str());
  }

  Eigen::MatrixXd x(rows, cols);
  Eigen::VectorXd y(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const FitSample& s = samples[static_cast<std::size_t>(r)];
    if (static_cast<Eigen::Index>(s.features.size()) != cols) {
      std::ostringstream os;
      os << "sample " << r + 1 << " has " << s.features.size()
         << " features; expected " << cols;
      throw InputError(os.str());
    }
    for (Eigen::Index c = 0; c < cols; ++c) x(r, c) = s.features[static_cast<std::size_t>(c)];
    y(r) = s.measured_power_watts - platform.idle_power_watts;
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < cols) {
    std::ostringstream os;
    os << "design matrix is rank deficient (rank " << qr.rank() << " of " << cols
       << ")";
    std::string unused;
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (x.col(c).cwiseAbs().maxCoeff() == 0.0) {
        unused += " sum_" + std::string(c % kFeatureDim == 0 ? "a" : "b") + "_k" +
                  std::to_string(c / kFeatureDim + 1);
      }
    }
    if (!unused.empty()) os << "; features never exercised:" << unused;
    throw RankDeficientError(os.str());
  }
  const Eigen::VectorXd beta = qr.solve(y);

  RegressionCoefficients out;
  out.beta.resize(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    for (int d = 0; d < kFeatureDim; ++d) {
      out.beta[static_cast<std::size_t>(k)].push_back(beta(k * kFeatureDim + d));
    }
  }

  const Eigen::VectorXd residual = y - x * beta;
  const double ss_res = residual.squaredNorm();
  const double mean = y.mean();
  const double ss_tot = (y.array() - mean).matrix().squaredNorm();
  out.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
  return out;
}

}  // namespace thermosched
