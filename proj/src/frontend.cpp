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

#include "yangsaf/frontend.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "yangsaf/parallel.hpp"

namespace yangsaf {
namespace {

// Magnitudes this far below the channel peak are indistinguishable from
// FFT rounding and are treated as zero.
constexpr double kRelativeMagnitudeFloor = 1e-12;

ChannelTrack detect_with_spectrum(std::span<const Complex> x_spectrum, std::size_t n,
                                  const ComplexKernelPair& kp, std::size_t valid_begin,
                                  std::size_t valid_end) {
  const std::size_t fft_size = x_spectrum.size();
  const auto h_spec = kernel_spectrum(kp.h, fft_size);
  const auto hd_spec = kernel_spectrum(kp.h_d, fft_size);
  const auto y1 = filter_spectrum(x_spectrum, h_spec, n);
  const auto yd = filter_spectrum(x_spectrum, hd_spec, n);

  ChannelTrack track;
  track.inst_freq.assign(n, std::numeric_limits<double>::quiet_NaN());
  track.aperiodicity_raw.assign(n, 0.0);
  track.aperiodicity_smoothed.assign(n, 0.0);
  track.valid.assign(n, 0);

  double peak1 = 0.0;
  for (std::size_t i = valid_begin; i < valid_end; ++i) peak1 = std::max(peak1, std::abs(y1[i]));
  const double floor1 = peak1 * kRelativeMagnitudeFloor;

  std::vector<Complex> y1n(n, Complex{0.0, 0.0});
  for (std::size_t i = valid_begin; i < valid_end; ++i) {
    const double mag = std::abs(y1[i]);
    if (peak1 > 0.0 && mag > floor1) {
      y1n[i] = y1[i] / mag;
      track.valid[i] = 1;
      if (auto w = flanagan_if(y1[i], yd[i])) track.inst_freq[i] = *w / kTwoPi;
    }
  }

  const auto y2 = filter_spectrum(signal_spectrum(std::span<const Complex>(y1n), fft_size), h_spec, n);
  double peak2 = 0.0;
  for (std::size_t i = valid_begin; i < valid_end; ++i) peak2 = std::max(peak2, std::abs(y2[i]));
  const double floor2 = peak2 * kRelativeMagnitudeFloor;

  std::vector<Complex> ak(n, Complex{0.0, 0.0});
  for (std::size_t i = valid_begin; i < valid_end; ++i) {
    const double mag2 = std::abs(y2[i]);
    double a = 1.0;
    if (track.valid[i] && peak2 > 0.0 && mag2 > floor2) {
      a = std::norm(y1n[i] - y2[i] / mag2);
    } else {
      track.valid[i] = 0;
      track.inst_freq[i] = std::numeric_limits<double>::quiet_NaN();
    }
    track.aperiodicity_raw[i] = a;
    ak[i] = a;
  }

  std::vector<Complex> smoother(kp.h.size());
  double total = 0.0;
  for (const auto& v : kp.h) total += std::abs(v);
  for (std::size_t i = 0; i < smoother.size(); ++i) smoother[i] = std::abs(kp.h[i]) / total;
  const auto smoothed = filter_spectrum(signal_spectrum(std::span<const Complex>(ak), fft_size),
                                        kernel_spectrum(smoother, fft_size), n);
  for (std::size_t i = 0; i < n; ++i)
    track.aperiodicity_smoothed[i] = std::max(0.0, smoothed[i].real());
  return track;
}

}  // namespace

double ChannelLayout::band_low(std::size_t k) const {
  return centers.at(k) * std::exp2(-0.5 / channels_per_octave);
}

double ChannelLayout::band_high(std::size_t k) const {
  return centers.at(k) * std::exp2(0.5 / channels_per_octave);
}

std::size_t ChannelLayout::nearest(double f) const {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < centers.size(); ++k) {
    const double d = std::abs(std::log(f / centers[k]));
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

ChannelLayout design_channels(double f_lo, double f_hi, int channels_per_octave,
                              double sample_rate) {
  if (!(f_lo > 0.0) || !(f_lo < f_hi))
    throw ParameterError("design_channels: require 0 < f_lo < f_hi");
  if (channels_per_octave < 1) throw ParameterError("design_channels: K must be >= 1");
  const double span = channels_per_octave * std::log2(f_hi / f_lo);
  const auto last = static_cast<int>(std::floor(span + 1e-9));
  ChannelLayout layout;
  layout.channels_per_octave = channels_per_octave;
  layout.f_lo = f_lo;
  layout.f_hi = f_hi;
  for (int n = 0; n <= last; ++n) {
    const double fc = f_lo * std::exp2(static_cast<double>(n) / channels_per_octave);
    if (!(fc < 0.5 * sample_rate))
      throw ParameterError("design_channels: channel center at or above Nyquist");
    layout.centers.push_back(fc);
  }
  return layout;
}

ChannelLayout design_channels(const AnalysisConfig& config, double sample_rate) {
  return design_channels(config.f_lo, config.f_hi, config.channels_per_octave, sample_rate);
}

std::optional<double> flanagan_if(Complex x, Complex x_d) {
  const double power = std::norm(x);
  if (!(power > 0.0)) return std::nullopt;
  return (x.real() * x_d.imag() - x.imag() * x_d.real()) / power;
}

ChannelTrack run_detector(std::span<const double> x, const ComplexKernelPair& kernels,
                          std::size_t valid_begin, std::size_t valid_end) {
  if (x.empty()) throw ParameterError("run_detector: empty signal");
  valid_end = std::min(valid_end, x.size());
  if (valid_begin >= valid_end) throw ParameterError("run_detector: empty valid range");
  const std::size_t fft_size = filter_fft_size(x.size(), kernels.half_length());
  return detect_with_spectrum(signal_spectrum(x, fft_size), x.size(), kernels, valid_begin,
                              valid_end);
}

std::vector<ChannelTrack> run_detectors(std::span<const double> x,
                                        std::span<const ComplexKernelPair> kernels,
                                        std::size_t valid_begin, std::size_t valid_end) {
  if (x.empty()) throw ParameterError("run_detectors: empty signal");
  valid_end = std::min(valid_end, x.size());
  if (valid_begin >= valid_end) throw ParameterError("run_detectors: empty valid range");
  std::size_t widest = 0;
  for (const auto& kp : kernels) widest = std::max(widest, kp.half_length());
  const auto spectrum = signal_spectrum(x, filter_fft_size(x.size(), widest));
  std::vector<ChannelTrack> tracks(kernels.size());
  parallel_for(kernels.size(), [&](std::size_t i) {
    tracks[i] = detect_with_spectrum(spectrum, x.size(), kernels[i], valid_begin, valid_end);
  });
  return tracks;
}

ChannelTrack channel_aperiodicity(const AudioBuffer& x, double f_c) {
  return run_detector(x.samples(), make_kernel_pair(f_c, x.sample_rate()), 0, x.size());
}

double equivalent_suppression_gain(const ComplexKernelPair& kernels, double f_dominant,
                                   double f_probe) {
  const double nyquist = 0.5 * kernels.sample_rate;
  if (!(f_probe > 0.0) || !(f_probe < nyquist) || !(f_dominant > 0.0) || !(f_dominant < nyquist))
    throw ParameterError("equivalent_suppression_gain: frequencies must lie in (0, Nyquist)");
  const Complex ref = frequency_response(kernels.h, f_dominant, kernels.sample_rate);
  if (std::abs(ref) == 0.0)
    throw ParameterError("equivalent_suppression_gain: dominant component in a spectral zero");
  const Complex hn = frequency_response(kernels.h, f_probe, kernels.sample_rate) / ref;
  const double g = std::abs(hn - hn * hn);
  return 20.0 * std::log10(std::max(g, 1e-15));
}

double equivalent_suppression_gain(const ChannelLayout& layout, double f_c, double f_probe,
                                   double sample_rate) {
  if (layout.centers.empty()) throw ParameterError("equivalent_suppression_gain: empty layout");
  const double center = layout.centers[layout.nearest(f_c)];
  return equivalent_suppression_gain(make_kernel_pair(center, sample_rate), f_c, f_probe);
}

std::vector<double> frame_grid(std::size_t n_samples, double sample_rate, double frame_rate) {
  if (!(frame_rate > 0.0)) throw ParameterError("frame_grid: frame_rate must be positive");
  const double last_t = static_cast<double>(n_samples - 1) / sample_rate;
  const auto count = static_cast<std::size_t>(std::floor(last_t * frame_rate + 1e-9)) + 1;
  std::vector<double> times(count);
  for (std::size_t j = 0; j < count; ++j) times[j] = static_cast<double>(j) / frame_rate;
  return times;
}

FrameMaps analyze_frontend(const AudioBuffer& x, const AnalysisConfig& config) {
  config.validate();
  const double fs = x.sample_rate();
  FrameMaps maps;
  maps.layout = design_channels(config, fs);
  maps.frame_rate = config.frame_rate;
  maps.sample_rate = fs;
  maps.frame_times = frame_grid(x.size(), fs, config.frame_rate);
  maps.frame_samples.resize(maps.frames());
  for (std::size_t j = 0; j < maps.frames(); ++j)
    maps.frame_samples[j] =
        std::min<std::size_t>(static_cast<std::size_t>(std::lround(maps.frame_times[j] * fs)),
                              x.size() - 1);

  const std::size_t n_ch = maps.channels();
  const std::size_t cells = maps.frames() * n_ch;
  maps.if_map.assign(cells, std::numeric_limits<double>::quiet_NaN());
  maps.ap_map.assign(cells, 1.0);
  maps.prob_map.assign(cells, 0.0);
  maps.masked.assign(cells, 1);
  maps.edge.assign(cells, 0);

  const std::size_t widest = kernel_half_length(maps.layout.centers.front(), fs);
  const std::size_t fft_size = filter_fft_size(x.size(), widest);
  const auto spectrum = signal_spectrum(x.samples(), fft_size);
  const double duration = static_cast<double>(x.size() - 1) / fs;

  parallel_for(n_ch, [&](std::size_t c) {
    const double fc = maps.layout.centers[c];
    const auto track = detect_with_spectrum(spectrum, x.size(), make_kernel_pair(fc, fs), 0, x.size());
    const double edge = 2.0 / fc;
    for (std::size_t j = 0; j < maps.frames(); ++j) {
      const std::size_t s = maps.frame_samples[j];
      const std::size_t cell = maps.index(j, c);
      const double t = maps.frame_times[j];
      maps.edge[cell] = (t < edge || t > duration - edge) ? 1 : 0;
      if (track.valid[s] && std::isfinite(track.inst_freq[s])) {
        maps.masked[cell] = 0;
        maps.if_map[cell] = track.inst_freq[s];
        maps.ap_map[cell] = std::min(1.0, track.aperiodicity_smoothed[s]);
      }
    }
  });
  return maps;
}

}  // namespace yangsaf
