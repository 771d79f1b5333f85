//
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

#include "yangsaf/mixing.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cassert>
#include <cmath>

#include "yangsaf/audio.hpp"

namespace yangsaf {
namespace {

std::vector<double> checked(std::span<const double> variances) {
  if (variances.empty()) throw ParameterError("optimal_weights: no estimates");
  std::vector<double> v(variances.begin(), variances.end());
  for (double& s : v) {
    if (std::isnan(s) || !(s > 0.0)) throw ParameterError("optimal_weights: variances must be > 0");
    s = std::min(s, kVarianceCap);
  }
  return v;
}

double variance_of(std::span<const double> weights, std::span<const double> variances) {
  double total = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) total += weights[k] * weights[k] * variances[k];
  return total;
}

}  // namespace

WeightSolution optimal_weights(std::span<const double> variances) {
  const auto v = checked(variances);
  const std::size_t n = v.size();
  WeightSolution sol;
  if (n == 1) {
    sol.weights = {1.0};
    sol.combined_variance = v[0];
    return sol;
  }
  // Row k: sigma_k^2 b_k + sigma_N^2 sum_p b_p = sigma_N^2.
  const Eigen::Index m = static_cast<Eigen::Index>(n - 1);
  const double last = v[n - 1];
  Eigen::MatrixXd a = Eigen::MatrixXd::Constant(m, m, last);
  for (Eigen::Index k = 0; k < m; ++k) a(k, k) += v[static_cast<std::size_t>(k)];
  const Eigen::VectorXd rhs = Eigen::VectorXd::Constant(m, last);
  const Eigen::VectorXd b = a.partialPivLu().solve(rhs);

  sol.weights.resize(n);
  double partial = 0.0;
  for (Eigen::Index k = 0; k < m; ++k) {
    sol.weights[static_cast<std::size_t>(k)] = b(k);
    partial += b(k);
  }
  sol.weights[n - 1] = 1.0 - partial;
  sol.combined_variance = variance_of(sol.weights, v);
#ifndef NDEBUG
  const auto oracle = optimal_weights_closed_form(variances);
  for (std::size_t k = 0; k < n; ++k) assert(std::abs(oracle.weights[k] - sol.weights[k]) < 1e-6);
#endif
  return sol;
}

WeightSolution optimal_weights_closed_form(std::span<const double> variances) {
  const auto v = checked(variances);
  double precision = 0.0;
  for (double s : v) precision += 1.0 / s;
  WeightSolution sol;
  sol.weights.resize(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) sol.weights[k] = (1.0 / v[k]) / precision;
  sol.combined_variance = 1.0 / precision;
  return sol;
}

std::pair<double, double> combine_estimates(std::span<const double> values,
                                            const WeightSolution& solution) {
  if (values.size() != solution.weights.size())
    throw ParameterError("combine_estimates: length mismatch");
  double acc = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) acc += solution.weights[k] * values[k];
  return {acc, solution.combined_variance};
}

}  // namespace yangsaf
