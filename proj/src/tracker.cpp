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

#include "yangsaf/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "yangsaf/mixing.hpp"
#include "yangsaf/probability.hpp"

namespace yangsaf {
namespace {

constexpr double kSkirtHz = 10.0;
constexpr double kAmplitudeFloor = 1e-12;

double skirt_gain(double f, double f_lo, double f_hi) {
  const double half = 0.5 * kSkirtHz;
  auto rise = [&](double edge) {
    if (f <= edge - half) return 0.0;
    if (f >= edge + half) return 1.0;
    return 0.5 - 0.5 * std::cos(kPi * (f - (edge - half)) / kSkirtHz);
  };
  return rise(f_lo) * (1.0 - rise(f_hi));
}

double octave_distance(double a, double b) { return std::abs(std::log2(a / b)); }

}  // namespace

SearchRange SearchRange::around(double center, double octaves_below, double octaves_above) {
  return {center, center * std::exp2(-octaves_below), center * std::exp2(octaves_above)};
}

std::vector<double> frame_amplitudes(const AudioBuffer& x, std::span<const double> frame_times,
                                     double frame_rate, double f_lo, double f_hi) {
  const double fs = x.sample_rate();
  const std::size_t n = x.size();
  const std::size_t size = fft_good_size(2 * n);
  auto spec = signal_spectrum(x.samples(), size);
  for (std::size_t i = 0; i < size; ++i) {
    const double f = static_cast<double>(std::min(i, size - i)) * fs / static_cast<double>(size);
    spec[i] *= skirt_gain(f, f_lo, f_hi);
  }
  fft_inverse(spec);

  const auto window = std::max<long>(1, std::lround(fs / frame_rate));
  std::vector<double> amp(frame_times.size(), 0.0);
  for (std::size_t j = 0; j < frame_times.size(); ++j) {
    const long center = std::lround(frame_times[j] * fs);
    const long begin = std::max(0L, center - window / 2);
    const long end = std::min(static_cast<long>(n), center - window / 2 + window);
    double acc = 0.0;
    for (long i = begin; i < end; ++i) acc += spec[static_cast<std::size_t>(i)].real() * spec[static_cast<std::size_t>(i)].real();
    amp[j] = end > begin ? std::sqrt(acc / static_cast<double>(end - begin)) : 0.0;
  }
  return amp;
}

SearchRange estimate_search_range(const FrameMaps& maps, std::span<const double> frame_amplitude,
                                  const AnalysisConfig& config) {
  if (frame_amplitude.size() != maps.frames())
    throw ParameterError("estimate_search_range: amplitude length mismatch");
  const auto bins = static_cast<std::size_t>(config.histogram_bins);
  const double log_lo = std::log(config.f_lo);
  const double log_span = std::log(config.f_hi) - log_lo;
  std::vector<double> hist(bins, 0.0);
  double total = 0.0;
  for (std::size_t j = 0; j < maps.frames(); ++j) {
    const double w = frame_amplitude[j];
    if (!(w > 0.0)) continue;
    for (std::size_t c = 0; c < maps.channels(); ++c) {
      const std::size_t cell = maps.index(j, c);
      if (maps.masked[cell]) continue;
      const double pos = (std::log(maps.if_map[cell]) - log_lo) / log_span;
      if (!(pos >= 0.0 && pos < 1.0)) continue;
      hist[std::min(bins - 1, static_cast<std::size_t>(pos * static_cast<double>(bins)))] += w;
      total += w;
    }
  }
  if (!(total > 0.0)) throw AnalysisError("estimate_search_range: no periodic evidence");
  double cum = 0.0;
  std::size_t b = 0;
  for (; b < bins; ++b) {
    cum += hist[b];
    if (cum >= 0.5 * total) break;
  }
  const double center =
      std::exp(log_lo + log_span * (static_cast<double>(b) + 0.5) / static_cast<double>(bins));
  return SearchRange::around(center, config.range_octaves_below, config.range_octaves_above);
}

SearchRange estimate_search_range(const FrameMaps& maps, const AudioBuffer& x,
                                  const AnalysisConfig& config) {
  return estimate_search_range(
      maps, frame_amplitudes(x, maps.frame_times, maps.frame_rate, config.f_lo, config.f_hi), config);
}

std::vector<double> hanning_kernel(double duration_s, double frame_rate) {
  auto len = std::max<long>(1, std::lround(duration_s * frame_rate));
  if (len % 2 == 0) ++len;
  std::vector<double> w(static_cast<std::size_t>(len));
  for (long i = 0; i < len; ++i)
    w[static_cast<std::size_t>(i)] = 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(i + 1) / static_cast<double>(len + 1));
  return w;
}

std::vector<double> smooth_probability_map(const FrameMaps& maps,
                                           std::span<const double> frame_amplitude,
                                           const AnalysisConfig& config) {
  if (frame_amplitude.size() != maps.frames())
    throw ParameterError("smooth_probability_map: amplitude length mismatch");
  const auto kernel = hanning_kernel(config.smoothing_window_s, maps.frame_rate);
  const long half = static_cast<long>(kernel.size() / 2);
  const long frames = static_cast<long>(maps.frames());
  const std::size_t n_ch = maps.channels();
  std::vector<double> out(maps.prob_map.size(), 0.0);
  std::vector<double> num(n_ch);
  for (long j = 0; j < frames; ++j) {
    std::fill(num.begin(), num.end(), 0.0);
    double den = 0.0;
    for (long m = -half; m <= half; ++m) {
      const long src = j + m;
      if (src < 0 || src >= frames) continue;
      const double w = kernel[static_cast<std::size_t>(m + half)] * frame_amplitude[static_cast<std::size_t>(src)];
      den += w;
      const double* row = &maps.prob_map[maps.index(static_cast<std::size_t>(src), 0)];
      for (std::size_t c = 0; c < n_ch; ++c) num[c] += w * row[c];
    }
    den = std::max(den, kAmplitudeFloor);
    for (std::size_t c = 0; c < n_ch; ++c) out[maps.index(static_cast<std::size_t>(j), c)] = num[c] / den;
  }
  return out;
}

ChannelPath track_best_channel(std::span<const double> prob, const ChannelLayout& layout,
                               std::size_t frames, const SearchRange& range,
                               const AnalysisConfig& config) {
  const std::size_t n_ch = layout.size();
  if (prob.size() != frames * n_ch) throw ParameterError("track_best_channel: map size mismatch");
  ChannelPath path;
  path.channel.assign(frames, -1);
  path.low_confidence.assign(frames, 0);
  int prev = -1;
  int carried = 0;
  for (std::size_t j = 0; j < frames; ++j) {
    int best = -1;
    double best_p = 0.0;
    for (std::size_t c = 0; c < n_ch; ++c) {
      const double fc = layout.centers[c];
      if (!range.contains(fc)) continue;
      if (prev >= 0 &&
          octave_distance(fc, layout.centers[static_cast<std::size_t>(prev)]) > config.gate_octaves + 1e-9)
        continue;
      const double p = prob[j * n_ch + c];
      if (p > best_p) {  // strict: ties stay on the lower channel
        best_p = p;
        best = static_cast<int>(c);
      }
    }
    if (best >= 0) {
      path.channel[j] = best;
      prev = best;
      carried = 0;
    } else if (prev >= 0 && carried < config.carry_limit_frames) {
      path.channel[j] = prev;
      path.low_confidence[j] = 1;
      ++carried;
    } else {
      prev = -1;
      carried = 0;
    }
  }
  return path;
}

ChannelPath snap_to_local_maxima(const FrameMaps& maps, const ChannelPath& path,
                                 const AnalysisConfig& config) {
  const std::size_t n_ch = maps.channels();
  ChannelPath out = path;
  for (std::size_t j = 0; j < maps.frames(); ++j) {
    const int chosen = path.channel[j];
    if (chosen < 0) continue;
    const double* p = &maps.prob_map[maps.index(j, 0)];
    const double f_chosen = maps.layout.centers[static_cast<std::size_t>(chosen)];
    int best = -1;
    double best_p = 0.0;
    long best_dist = 0;
    for (std::size_t c = 0; c < n_ch; ++c) {
      if (octave_distance(maps.layout.centers[c], f_chosen) > config.local_max_radius_octaves + 1e-9)
        continue;
      const bool peak = p[c] > 0.0 && (c == 0 || p[c] >= p[c - 1]) && (c + 1 == n_ch || p[c] >= p[c + 1]);
      if (!peak) continue;
      const long dist = std::abs(static_cast<long>(c) - chosen);
      if (best < 0 || p[c] > best_p || (p[c] == best_p && dist < best_dist)) {
        best = static_cast<int>(c);
        best_p = p[c];
        best_dist = dist;
      }
    }
    if (best >= 0) out.channel[j] = best;
  }
  return out;
}

F0Trajectory initial_f0(const FrameMaps& maps, const ChannelPath& path,
                        const AnalysisConfig& config) {
  F0Trajectory traj;
  traj.resize(maps.frames());
  traj.times = maps.frame_times;
  const auto& centers = maps.layout.centers;
  std::vector<double> values, vars;
  for (std::size_t j = 0; j < maps.frames(); ++j) {
    const int k = path.channel[j];
    if (k < 0) continue;
    const double fk = centers[static_cast<std::size_t>(k)];
    const double lo = 0.5 * fk;
    const double hi = 1.25 * fk;
    values.clear();
    vars.clear();
    for (std::size_t m = 0; m < maps.channels(); ++m) {
      if (!(centers[m] > lo && centers[m] < hi)) continue;
      const std::size_t cell = maps.index(j, m);
      if (maps.masked[cell]) continue;
      const double f = maps.if_map[cell];
      if (!(f > lo && f < hi)) continue;
      values.push_back(f);
      vars.push_back(variance_from_aperiodicity(maps.ap_map[cell], config.sigma_scale, config.sigma_min));
    }
    traj.source_channel[j] = k;
    if (path.low_confidence[j]) traj.flags[j] |= kFlagLowConfidence;
    if (values.empty()) continue;
    const auto [f0, var] = combine_estimates(values, optimal_weights(vars));
    traj.set(j, f0, var);
  }
  return traj;
}

InitialAnalysis initial_analysis(const AudioBuffer& x, const AnalysisConfig& config) {
  InitialAnalysis out;
  out.maps = analyze_frontend(x, config);
  fill_probability_map(out.maps, config);
  out.frame_amplitude =
      frame_amplitudes(x, out.maps.frame_times, out.maps.frame_rate, config.f_lo, config.f_hi);
  out.range = estimate_search_range(out.maps, out.frame_amplitude, config);
  out.smoothed_prob = smooth_probability_map(out.maps, out.frame_amplitude, config);
  const auto gated = track_best_channel(out.smoothed_prob, out.maps.layout, out.maps.frames(),
                                        out.range, config);
  out.path = snap_to_local_maxima(out.maps, gated, config);
  out.initial = initial_f0(out.maps, out.path, config);
  return out;
}

}  // namespace yangsaf
