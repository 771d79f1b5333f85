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

#include <cstdint>
#include <span>
#include <vector>

#include "yangsaf/audio.hpp"
#include "yangsaf/config.hpp"
#include "yangsaf/frontend.hpp"
#include "yangsaf/trajectory.hpp"

namespace yangsaf {

/// Utterance-level F0 search range around a center frequency.
struct SearchRange {
  double center = 0.0;
  double lo = 0.0;
  double hi = 0.0;

  static SearchRange around(double center, double octaves_below = 1.3, double octaves_above = 1.2);
  bool contains(double f) const { return f >= lo && f <= hi; }
};

/// RMS over a one-frame window, centered on each frame time, of x
/// band-limited to [f_lo, f_hi] (FFT brick wall, 10 Hz raised-cosine skirts).
std::vector<double> frame_amplitudes(const AudioBuffer& x, std::span<const double> frame_times,
                                     double frame_rate, double f_lo, double f_hi);

/// Median of the amplitude-weighted histogram of all unmasked IF entries.
/// Throws AnalysisError when no cell carries weight.
SearchRange estimate_search_range(const FrameMaps& maps, std::span<const double> frame_amplitude,
                                  const AnalysisConfig& config);
SearchRange estimate_search_range(const FrameMaps& maps, const AudioBuffer& x,
                                  const AnalysisConfig& config);

/// Hanning kernel (zero endpoints excluded) of the given duration in frames,
/// rounded to an odd length.
std::vector<double> hanning_kernel(double duration_s, double frame_rate);

/// Amplitude-weighted moving average of prob_map along time, per channel.
std::vector<double> smooth_probability_map(const FrameMaps& maps,
                                           std::span<const double> frame_amplitude,
                                           const AnalysisConfig& config);

struct ChannelPath {
  std::vector<int> channel;                 // -1 where masked
  std::vector<std::uint8_t> low_confidence;
};

/// Greedy gated argmax over a [frame][channel] probability map.
ChannelPath track_best_channel(std::span<const double> prob, const ChannelLayout& layout,
                               std::size_t frames, const SearchRange& range,
                               const AnalysisConfig& config);

/// Moves each choice to the strongest local maximum of the unsmoothed map
/// within local_max_radius_octaves (ties toward the nearer channel).
ChannelPath snap_to_local_maxima(const FrameMaps& maps, const ChannelPath& path,
                                 const AnalysisConfig& config);

/// Minimum-variance combination of the IFs of channels m with
/// 0.5 f_c[k] < f_c[m] < 1.25 f_c[k]; members whose IF leaves that
/// interval are skipped.
F0Trajectory initial_f0(const FrameMaps& maps, const ChannelPath& path,
                        const AnalysisConfig& config);

/// Everything the tracker stage produces.
struct InitialAnalysis {
  FrameMaps maps;
  std::vector<double> frame_amplitude;
  SearchRange range;
  std::vector<double> smoothed_prob;
  ChannelPath path;
  F0Trajectory initial;
};

/// Front end, probability map and tracker: the initial estimate.
InitialAnalysis initial_analysis(const AudioBuffer& x, const AnalysisConfig& config);

}  // namespace yangsaf
