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

#include "yangsaf/probability.hpp"

#include <cmath>

#include "yangsaf/parallel.hpp"

namespace yangsaf {
namespace {

// P(Z <= z) for a standard normal, via erfc so both tails keep precision.
double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

double MixtureFrame::density(double nu) const {
  double p = 0.0;
  for (const auto& c : components) {
    const double d = nu - c.log_center;
    p += c.weight * std::exp(-0.5 * d * d / c.variance) / std::sqrt(kTwoPi * c.variance);
  }
  return p;
}

double variance_from_aperiodicity(double a_ks, double sigma_scale, double sigma_min) {
  const double floor = sigma_min * sigma_min;
  return std::max(floor, sigma_scale * std::max(0.0, a_ks));
}

MixtureFrame build_mixture(std::span<const double> frame_if, std::span<const double> frame_var) {
  if (frame_if.size() != frame_var.size()) throw ParameterError("build_mixture: length mismatch");
  MixtureFrame mix;
  for (std::size_t k = 0; k < frame_if.size(); ++k) {
    const double f = frame_if[k];
    if (!std::isfinite(f) || !(f > 0.0)) continue;
    if (!(frame_var[k] > 0.0)) throw ParameterError("build_mixture: variance must be positive");
    mix.components.push_back({std::log(f), frame_var[k], 0.0});
  }
  const double w = mix.components.empty() ? 0.0 : 1.0 / static_cast<double>(mix.components.size());
  for (auto& c : mix.components) c.weight = w;
  return mix;
}

double channel_probability(const MixtureFrame& mix, std::size_t k, const ChannelLayout& layout) {
  if (k >= layout.size()) throw ParameterError("channel_probability: channel out of range");
  const double lo = std::log(layout.band_low(k));
  const double hi = std::log(layout.band_high(k));
  double p = 0.0;
  for (const auto& c : mix.components) {
    const double s = std::sqrt(c.variance);
    p += c.weight * (normal_cdf((hi - c.log_center) / s) - normal_cdf((lo - c.log_center) / s));
  }
  return p;
}

void fill_probability_map(FrameMaps& maps, const AnalysisConfig& config) {
  const std::size_t n_ch = maps.channels();
  maps.prob_map.assign(maps.frames() * n_ch, 0.0);
  parallel_for(maps.frames(), [&](std::size_t j) {
    std::vector<double> freqs(n_ch), vars(n_ch);
    for (std::size_t c = 0; c < n_ch; ++c) {
      const std::size_t cell = maps.index(j, c);
      freqs[c] = maps.masked[cell] ? std::nan("") : maps.if_map[cell];
      vars[c] = variance_from_aperiodicity(maps.ap_map[cell], config.sigma_scale, config.sigma_min);
    }
    const auto mix = build_mixture(freqs, vars);
    if (mix.empty()) return;
    for (std::size_t c = 0; c < n_ch; ++c)
      maps.prob_map[maps.index(j, c)] = channel_probability(mix, c, maps.layout);
  });
}

}  // namespace yangsaf
