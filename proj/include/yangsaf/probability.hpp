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

#include <cstddef>
#include <span>
#include <vector>

#include "yangsaf/config.hpp"
#include "yangsaf/frontend.hpp"

namespace yangsaf {

/// One Gaussian per contributing channel on the natural-log frequency axis.
struct MixtureComponent {
  double log_center = 0.0;  // ln(f) of the channel's instantaneous frequency
  double variance = 0.0;    // (ln Hz)^2
  double weight = 0.0;
};

struct MixtureFrame {
  std::vector<MixtureComponent> components;
  bool empty() const { return components.empty(); }
  /// Mixture density at nu = ln(f), standard normal kernels.
  double density(double nu) const;
};

/// sigma^2 = sigma_scale * a_ks, floored at sigma_min^2.
double variance_from_aperiodicity(double a_ks, double sigma_scale, double sigma_min);

/// Uniformly weighted mixture over the entries whose frequency is finite
/// and positive. Returns an empty mixture when nothing contributes.
MixtureFrame build_mixture(std::span<const double> frame_if, std::span<const double> frame_var);

/// Probability mass of the mixture inside channel k's band [f_L, f_H].
double channel_probability(const MixtureFrame& mix, std::size_t k, const ChannelLayout& layout);

/// Fills maps.prob_map from if_map / ap_map.
void fill_probability_map(FrameMaps& maps, const AnalysisConfig& config);

}  // namespace yangsaf
