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
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "yangsaf/audio.hpp"
#include "yangsaf/config.hpp"
#include "yangsaf/signal_core.hpp"

namespace yangsaf {

/// Log-spaced channel centers, K per octave, starting at f_lo.
struct ChannelLayout {
  std::vector<double> centers;
  int channels_per_octave = 12;
  double f_lo = 0.0;
  double f_hi = 0.0;

  std::size_t size() const { return centers.size(); }
  /// Band edges f_c 2^(-1/2K) and f_c 2^(1/2K).
  double band_low(std::size_t k) const;
  double band_high(std::size_t k) const;
  /// Index of the channel whose center is closest to f on a log axis.
  std::size_t nearest(double f) const;
};

ChannelLayout design_channels(double f_lo, double f_hi, int channels_per_octave,
                              double sample_rate);
ChannelLayout design_channels(const AnalysisConfig& config, double sample_rate);

/// Flanagan's instantaneous angular frequency (rad/s) from a filter output
/// and its time derivative. Empty when |x| == 0.
std::optional<double> flanagan_if(Complex x, Complex x_d);

/// Per-sample detector outputs of one channel. inst_freq is NaN where the
/// filter output vanished; such samples carry aperiodicity_raw = 1.
struct ChannelTrack {
  std::vector<double> inst_freq;               // Hz
  std::vector<double> aperiodicity_raw;        // |y1' - y2'|^2
  std::vector<double> aperiodicity_smoothed;   // unit-area |h| smoothing of the above
  std::vector<std::uint8_t> valid;

  std::size_t size() const { return inst_freq.size(); }
};

/// Runs IF estimation and the normalized double-filter residual cascade on
/// x. Samples outside [valid_begin, valid_end) are treated as lying outside
/// the signal: the normalized first-stage output is forced to zero there so
/// a padded segment reproduces whole-signal results in its interior.
ChannelTrack run_detector(std::span<const double> x, const ComplexKernelPair& kernels,
                          std::size_t valid_begin, std::size_t valid_end);

/// run_detector for several kernels sharing one forward transform of x.
std::vector<ChannelTrack> run_detectors(std::span<const double> x,
                                        std::span<const ComplexKernelPair> kernels,
                                        std::size_t valid_begin, std::size_t valid_end);

/// run_detector over the whole buffer with the front-end kernel at f_c.
ChannelTrack channel_aperiodicity(const AudioBuffer& x, double f_c);

/// Relative gain (dB) of the residual path for a minor component at
/// f_probe when the dominant component sits at f_dominant:
/// |Hn - Hn^2| with Hn the response normalized at f_dominant.
double equivalent_suppression_gain(const ComplexKernelPair& kernels, double f_dominant,
                                   double f_probe);
/// Same, using the layout channel nearest f_c as the filter and a dominant
/// component at f_c.
double equivalent_suppression_gain(const ChannelLayout& layout, double f_c, double f_probe,
                                   double sample_rate);

/// Frame-rate maps, row-major [frame][channel].
struct FrameMaps {
  std::vector<double> frame_times;
  std::vector<std::size_t> frame_samples;
  ChannelLayout layout;
  double frame_rate = 0.0;
  double sample_rate = 0.0;
  std::vector<double> if_map;          // Hz, NaN where masked
  std::vector<double> ap_map;          // a_ks clamped to [0, 1]
  std::vector<double> prob_map;        // filled by fill_probability_map
  std::vector<std::uint8_t> masked;
  std::vector<std::uint8_t> edge;      // within 2/f_c of either signal end

  std::size_t frames() const { return frame_times.size(); }
  std::size_t channels() const { return layout.size(); }
  std::size_t index(std::size_t frame, std::size_t channel) const {
    return frame * layout.size() + channel;
  }
};

/// Frame times j/frame_rate covering [0, duration) and their nearest samples.
std::vector<double> frame_grid(std::size_t n_samples, double sample_rate, double frame_rate);

FrameMaps analyze_frontend(const AudioBuffer& x, const AnalysisConfig& config);

}  // namespace yangsaf
