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

#pragma once

#include <span>
#include <utility>
#include <vector>

namespace yangsaf {

/// Minimum-variance mixing of independent unbiased estimates.
struct WeightSolution {
  std::vector<double> weights;   // sum to one
  double combined_variance = 0.0;
};

/// Variances above this are clipped before solving.
inline constexpr double kVarianceCap = 1e12;

/// Solves the (N-1)-dimensional stationarity system
///   sigma_N^2 = b_k sigma_k^2 + sigma_N^2 sum_{n<N} b_n,  k = 1..N-1,
/// then b_N = 1 - sum b_k. Throws ParameterError for N == 0 or any
/// non-positive or non-finite variance.
WeightSolution optimal_weights(std::span<const double> variances);

/// Inverse-variance normalization; the closed form of the same optimum.
WeightSolution optimal_weights_closed_form(std::span<const double> variances);

/// Weighted sum of values with the solution's combined variance.
std::pair<double, double> combine_estimates(std::span<const double> values,
                                            const WeightSolution& solution);

}  // namespace yangsaf
