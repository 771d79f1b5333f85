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

#include "yangsaf/refinement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

#include "yangsaf/calibration.hpp"
#include "yangsaf/mixing.hpp"

namespace yangsaf {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Keeps inverse-variance weights finite on noise-free input.
constexpr double kMinAperiodicity = 1e-14;
constexpr double kBankReference = 440.0;
// Half length of the interpolation filter, in original samples.
constexpr int kInterpolatorHalfTaps = 16;
// Lowpass applied to ln F0 (at the frame rate) before it drives the warp:
// cutoff at a quarter of the frame rate, half length in frames.
constexpr double kWarpCutoffPerFrame = 0.35;
constexpr int kWarpSmoothingHalfTaps = 12;

struct HarmonicSample {
  int harmonic = 0;
  double freq = kNaN;
  double aperiodicity = kNaN;
};

double track_value(const std::vector<double>& v, long idx) {
  if (idx < 0 || idx >= static_cast<long>(v.size())) return kNaN;
  return v[static_cast<std::size_t>(idx)];
}

// Linear interpolation between the two neighbouring samples when both are
// valid, else the nearer valid one.
std::vector<HarmonicSample> sample_tracks(const HarmonicDetectorBank& bank,
                                          const HarmonicDetectorBank::Tracks& tracks,
                                          double position) {
  const double local = position - static_cast<double>(tracks.origin);
  const auto i0 = static_cast<long>(std::floor(local));
  const double frac = local - static_cast<double>(i0);
  std::vector<HarmonicSample> out;
  out.reserve(tracks.per_harmonic.size());
  for (std::size_t h = 0; h < tracks.per_harmonic.size(); ++h) {
    const auto& t = tracks.per_harmonic[h];
    HarmonicSample s;
    s.harmonic = bank.detectors()[h].harmonic;
    const double f0 = track_value(t.inst_freq, i0);
    const double f1 = track_value(t.inst_freq, i0 + 1);
    const double a0 = track_value(t.aperiodicity_smoothed, i0);
    const double a1 = track_value(t.aperiodicity_smoothed, i0 + 1);
    if (std::isfinite(f0) && std::isfinite(f1)) {
      s.freq = f0 + frac * (f1 - f0);
      s.aperiodicity = a0 + frac * (a1 - a0);
    } else if (std::isfinite(f0) && frac < 0.5) {
      s.freq = f0;
      s.aperiodicity = a0;
    } else if (std::isfinite(f1)) {
      s.freq = f1;
      s.aperiodicity = a1;
    } else if (std::isfinite(f0)) {
      s.freq = f0;
      s.aperiodicity = a0;
    }
    out.push_back(s);
  }
  return out;
}

// Minimum-variance F0 from harmonic evidence f_k / k. Detectors whose IF
// has left their own band (|f_k - k f_ref| >= f_ref / 2) are skipped.
std::optional<std::pair<double, double>> combine_harmonics(std::span<const HarmonicSample> samples,
                                                           double f_ref,
                                                           const AnalysisConfig& config) {
  std::vector<double> values, vars;
  for (const auto& s : samples) {
    if (!std::isfinite(s.freq)) continue;
    const double k = s.harmonic;
    if (std::abs(s.freq - k * f_ref) >= 0.5 * f_ref) continue;
    double var = config.sigma_scale * std::max(s.aperiodicity, kMinAperiodicity);
    if (config.harmonic_variance_over_k2) var /= k * k;
    values.push_back(s.freq / k);
    vars.push_back(var);
  }
  if (values.empty()) return std::nullopt;
  return combine_estimates(values, optimal_weights(vars));
}

void fill_report_row(HarmonicReport& report, std::size_t frame,
                     std::span<const HarmonicSample> samples) {
  for (const auto& s : samples) {
    if (s.harmonic > report.harmonics) continue;
    const std::size_t idx = report.index(frame, s.harmonic);
    report.inst_freq[idx] = s.freq;
    report.aperiodicity[idx] = s.aperiodicity;
    report.snr_db[idx] = std::isfinite(s.aperiodicity) ? aperiodicity_to_snr_db(s.aperiodicity) : kNaN;
  }
}

// Accepts or rejects a refined value against the operator's input.
void store_refined(F0Trajectory& out, std::size_t j, double input_f0,
                   std::optional<std::pair<double, double>> refined, const AnalysisConfig& config) {
  if (!refined) {
    out.flags[j] |= kFlagNoHarmonics;
    return;
  }
  const auto [f0, var] = *refined;
  if (!(f0 > 0.0) || std::abs(std::log2(f0 / input_f0)) > config.sanity_gate_octaves) {
    out.flags[j] |= kFlagSanityGate;
    return;
  }
  out.set(j, f0, var);
}

long bank_grid_index(double f0, double step_semitones) {
  return std::lround(12.0 * std::log2(f0 / kBankReference) / step_semitones);
}

double bank_grid_frequency(long g, double step_semitones) {
  return kBankReference * std::exp2(static_cast<double>(g) * step_semitones / 12.0);
}

// Natural cubic spline second derivatives for knots (x, y).
std::vector<double> spline_second_derivatives(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  std::vector<double> m(n, 0.0);
  if (n < 3) return m;
  std::vector<double> c(n, 0.0), d(n, 0.0);
  // Thomas algorithm on the interior equations.
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x[i] - x[i - 1];
    const double h1 = x[i + 1] - x[i];
    const double a = h0 / 6.0;
    const double b = (h0 + h1) / 3.0;
    const double cc = h1 / 6.0;
    const double r = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
    const double denom = b - a * c[i - 1];
    c[i] = cc / denom;
    d[i] = (r - a * d[i - 1]) / denom;
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m[i] = d[i] - c[i] * m[i + 1];
    if (i == 1) break;
  }
  return m;
}

// Zero-phase windowed-sinc lowpass over the unmasked knots. Ends are
// extended by odd reflection so linear trends pass unchanged.
std::vector<double> lowpass_knots(std::span<const double> y) {
  const int half = kWarpSmoothingHalfTaps;
  const long n = static_cast<long>(y.size());
  if (n < 3) return {y.begin(), y.end()};
  std::vector<double> taps(static_cast<std::size_t>(2 * half + 1));
  double sum = 0.0;
  for (int i = -half; i <= half; ++i) {
    const double arg = 2.0 * kWarpCutoffPerFrame * i;
    const double sinc = i == 0 ? 1.0 : std::sin(kPi * arg) / (kPi * arg);
    // Window spans +-(half + 1) frames so the outermost taps stay nonzero.
    const double w = nuttall_value(static_cast<double>(i), 2.0 / (half + 1));
    taps[static_cast<std::size_t>(i + half)] = sinc * w;
    sum += sinc * w;
  }
  for (double& t : taps) t /= sum;
  auto at = [&](long i) {
    if (i < 0) return 2.0 * y[0] - y[static_cast<std::size_t>(std::min(-i, n - 1))];
    if (i >= n) return 2.0 * y[static_cast<std::size_t>(n - 1)] -
                       y[static_cast<std::size_t>(std::max(2 * (n - 1) - i, 0L))];
    return y[static_cast<std::size_t>(i)];
  };
  std::vector<double> out(y.size());
  for (long i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int k = -half; k <= half; ++k) acc += taps[static_cast<std::size_t>(k + half)] * at(i + k);
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Harmonic bank

HarmonicDetectorBank::HarmonicDetectorBank(double f0_ref, int max_harmonics, double sample_rate)
    : f0_ref_(f0_ref), sample_rate_(sample_rate) {
  if (!(f0_ref > 0.0)) throw ParameterError("HarmonicDetectorBank: f0_ref must be positive");
  if (max_harmonics < 1) throw ParameterError("HarmonicDetectorBank: need at least one harmonic");
  for (int k = 1; k <= max_harmonics; ++k) {
    const double center = k * f0_ref;
    if (!(center < 0.5 * sample_rate)) break;
    detectors_.push_back({k, make_kernel_pair(center, f0_ref, sample_rate)});
  }
  if (detectors_.empty()) throw ParameterError("HarmonicDetectorBank: f0_ref above Nyquist");
}

std::size_t HarmonicDetectorBank::padding() const {
  return 3 * detectors_.front().kernels.half_length() + 2;
}

HarmonicDetectorBank::Tracks HarmonicDetectorBank::measure(std::span<const double> x,
                                                           std::size_t begin,
                                                           std::size_t end) const {
  if (begin >= end || end > x.size()) throw ParameterError("HarmonicDetectorBank: bad range");
  const long pad = static_cast<long>(padding());
  const long seg_begin = static_cast<long>(begin) - pad;
  const long seg_end = static_cast<long>(end) + pad;
  const long n = static_cast<long>(x.size());
  std::vector<double> segment(static_cast<std::size_t>(seg_end - seg_begin), 0.0);
  for (long i = std::max(0L, seg_begin); i < std::min(n, seg_end); ++i)
    segment[static_cast<std::size_t>(i - seg_begin)] = x[static_cast<std::size_t>(i)];
  const auto valid_begin = static_cast<std::size_t>(std::max(0L, -seg_begin));
  const auto valid_end = static_cast<std::size_t>(std::min(seg_end, n) - seg_begin);

  std::vector<ComplexKernelPair> kernels;
  kernels.reserve(detectors_.size());
  for (const auto& d : detectors_) kernels.push_back(d.kernels);
  Tracks tracks;
  tracks.origin = seg_begin;
  tracks.per_harmonic = run_detectors(segment, kernels, valid_begin, valid_end);
  return tracks;
}

void HarmonicReport::resize(std::size_t frames, int m) {
  harmonics = m;
  times.assign(frames, 0.0);
  const std::size_t cells = frames * static_cast<std::size_t>(m);
  inst_freq.assign(cells, kNaN);
  aperiodicity.assign(cells, kNaN);
  snr_db.assign(cells, kNaN);
}

double aperiodicity_to_snr_db(double a_ks) {
  constexpr double kCeiling = 300.0;
  if (!(a_ks > 0.0)) return kCeiling;
  const auto& table = kAperiodicityVsSnr;
  const double la = std::log10(a_ks);
  // Rows ascend in SNR, so aperiodicity descends.
  if (a_ks >= table.front().second) return table.front().first;
  if (a_ks <= table.back().second)
    return std::min(kCeiling, table.back().first + 10.0 * (std::log10(table.back().second) - la));
  for (std::size_t i = 1; i < table.size(); ++i) {
    if (a_ks >= table[i].second) {
      const double l0 = std::log10(table[i - 1].second);
      const double l1 = std::log10(table[i].second);
      const double frac = (la - l0) / (l1 - l0);
      return table[i - 1].first + frac * (table[i].first - table[i - 1].first);
    }
  }
  return table.back().first;
}

// ---------------------------------------------------------------------------
// H_m

F0Trajectory refine_harmonic(const AudioBuffer& x, const F0Trajectory& traj, int m,
                             const AnalysisConfig& config, HarmonicReport* report) {
  if (m < 1) throw ParameterError("refine_harmonic: m must be >= 1");
  const double fs = x.sample_rate();
  F0Trajectory out = traj;
  if (report) {
    report->resize(traj.size(), m);
    report->times = traj.times;
    report->f0_ref = 0.0;
  }

  // Frames sharing a bank design are measured together.
  std::map<long, std::vector<std::size_t>> groups;
  std::vector<std::size_t> positions(traj.size(), 0);
  for (std::size_t j = 0; j < traj.size(); ++j) {
    if (traj.is_masked(j)) continue;
    if (!(traj.f0[j] > 0.0)) throw ParameterError("refine_harmonic: non-positive F0");
    positions[j] = std::min<std::size_t>(static_cast<std::size_t>(std::max(0L, std::lround(traj.times[j] * fs))),
                                         x.size() - 1);
    groups[bank_grid_index(traj.f0[j], config.bank_step_semitones)].push_back(j);
  }

  for (auto& [g, frames] : groups) {
    const HarmonicDetectorBank bank(bank_grid_frequency(g, config.bank_step_semitones), m, fs);
    const std::size_t gap = 2 * bank.padding();
    std::sort(frames.begin(), frames.end(),
              [&](std::size_t a, std::size_t b) { return positions[a] < positions[b]; });
    std::size_t i = 0;
    while (i < frames.size()) {
      std::size_t k = i;
      while (k + 1 < frames.size() && positions[frames[k + 1]] - positions[frames[k]] <= gap) ++k;
      const auto tracks = bank.measure(x.samples(), positions[frames[i]], positions[frames[k]] + 1);
      for (std::size_t q = i; q <= k; ++q) {
        const std::size_t j = frames[q];
        const auto samples = sample_tracks(bank, tracks, static_cast<double>(positions[j]));
        store_refined(out, j, traj.f0[j], combine_harmonics(samples, bank.f0_ref(), config), config);
        if (report) fill_report_row(*report, j, samples);
      }
      i = k + 1;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Time warping

TimeWarp::TimeWarp(std::vector<double> rate, double sample_rate, double f0_ref)
    : rate_(std::move(rate)), sample_rate_(sample_rate), f0_ref_(f0_ref) {
  if (rate_.empty()) throw ParameterError("TimeWarp: empty rate");
  tau_.resize(rate_.size());
  tau_[0] = 0.0;
  const double dt = 1.0 / sample_rate_;
  for (std::size_t i = 1; i < rate_.size(); ++i) {
    if (!(rate_[i] > 0.0)) throw ParameterError("TimeWarp: rate must be positive");
    tau_[i] = tau_[i - 1] + 0.5 * (rate_[i - 1] + rate_[i]) * dt;
  }
}

double TimeWarp::to_warped(double t) const {
  const double pos = t * sample_rate_;
  const long last = static_cast<long>(tau_.size()) - 1;
  if (pos <= 0.0) return t * rate_.front();
  if (pos >= static_cast<double>(last))
    return tau_.back() + (t - static_cast<double>(last) / sample_rate_) * rate_.back();
  const auto i = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(i);
  return tau_[i] + frac * (tau_[i + 1] - tau_[i]);
}

double TimeWarp::to_original(double tau) const {
  if (tau <= 0.0) return tau / rate_.front();
  if (tau >= tau_.back())
    return static_cast<double>(tau_.size() - 1) / sample_rate_ + (tau - tau_.back()) / rate_.back();
  const auto it = std::upper_bound(tau_.begin(), tau_.end(), tau);
  const auto i = static_cast<std::size_t>(it - tau_.begin()) - 1;
  const double frac = (tau - tau_[i]) / (tau_[i + 1] - tau_[i]);
  return (static_cast<double>(i) + frac) / sample_rate_;
}

double TimeWarp::rate_at(double t) const {
  const double pos = t * sample_rate_;
  if (pos <= 0.0) return rate_.front();
  const long last = static_cast<long>(rate_.size()) - 1;
  if (pos >= static_cast<double>(last)) return rate_.back();
  const auto i = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(i);
  return rate_[i] + frac * (rate_[i + 1] - rate_[i]);
}

std::vector<double> trajectory_at_samples(const F0Trajectory& traj, std::size_t n_samples,
                                          double sample_rate) {
  std::vector<double> kt, ky;
  for (std::size_t j = 0; j < traj.size(); ++j) {
    if (traj.is_masked(j)) continue;
    if (!(traj.f0[j] > 0.0)) throw ParameterError("trajectory_at_samples: non-positive F0");
    kt.push_back(traj.times[j]);
    ky.push_back(std::log(traj.f0[j]));
  }
  if (kt.empty()) throw ParameterError("trajectory_at_samples: trajectory fully masked");

  // Runs of knots on the regular frame spacing get a spline each; the
  // spacing is taken as the smallest knot gap.
  double step = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < kt.size(); ++i) step = std::min(step, kt[i] - kt[i - 1]);
  std::vector<double> second(kt.size(), 0.0);
  std::vector<std::uint8_t> in_run(kt.size() > 0 ? kt.size() - 1 : 0, 0);
  std::size_t start = 0;
  for (std::size_t i = 1; i <= kt.size(); ++i) {
    const bool split = i == kt.size() || kt[i] - kt[i - 1] > 1.5 * step;
    if (!split) continue;
    const std::span<const double> xs(kt.data() + start, i - start);
    const std::span<const double> ys(ky.data() + start, i - start);
    const auto m = spline_second_derivatives(xs, ys);
    std::copy(m.begin(), m.end(), second.begin() + static_cast<long>(start));
    for (std::size_t q = start; q + 1 < i; ++q) in_run[q] = 1;
    start = i;
  }

  std::vector<double> f0(n_samples);
  std::size_t seg = 0;
  for (std::size_t s = 0; s < n_samples; ++s) {
    const double t = static_cast<double>(s) / sample_rate;
    double y;
    if (t <= kt.front()) {
      y = ky.front();
    } else if (t >= kt.back()) {
      y = ky.back();
    } else {
      while (seg + 1 < kt.size() && kt[seg + 1] < t) ++seg;
      const double h = kt[seg + 1] - kt[seg];
      const double a = (kt[seg + 1] - t) / h;
      const double b = 1.0 - a;
      y = a * ky[seg] + b * ky[seg + 1];
      if (in_run[seg])
        y += ((a * a * a - a) * second[seg] + (b * b * b - b) * second[seg + 1]) * h * h / 6.0;
    }
    f0[s] = std::exp(y);
  }
  return f0;
}

std::vector<double> upsample(std::span<const double> x, int factor) {
  if (factor < 1) throw ParameterError("upsample: factor must be >= 1");
  if (factor == 1) return {x.begin(), x.end()};
  const long u = factor;
  const long half = kInterpolatorHalfTaps * u;
  // sinc with zeros at multiples of the factor, tapered by a Nuttall window
  // spanning +-kInterpolatorHalfTaps original samples.
  const double width = 2.0 / static_cast<double>(kInterpolatorHalfTaps);
  std::vector<double> taps(static_cast<std::size_t>(2 * half + 1));
  for (long i = -half; i <= half; ++i) {
    const double arg = static_cast<double>(i) / static_cast<double>(u);
    const double sinc = i == 0 ? 1.0 : std::sin(kPi * arg) / (kPi * arg);
    taps[static_cast<std::size_t>(i + half)] = sinc * nuttall_value(arg, width);
  }
  const long n = static_cast<long>(x.size());
  std::vector<double> out(static_cast<std::size_t>(n * u), 0.0);
  for (long p = 0; p < n * u; ++p) {
    const long phase = p % u;
    if (phase == 0) {
      out[static_cast<std::size_t>(p)] = x[static_cast<std::size_t>(p / u)];
      continue;
    }
    double acc = 0.0;
    // Input sample q sits at upsampled index q*u; tap offset p - q*u.
    const long q_lo = std::max(0L, (p - half + u - 1) / u);
    const long q_hi = std::min(n - 1, (p + half) / u);
    for (long q = q_lo; q <= q_hi; ++q)
      acc += x[static_cast<std::size_t>(q)] * taps[static_cast<std::size_t>(p - q * u + half)];
    out[static_cast<std::size_t>(p)] = acc;
  }
  return out;
}

WarpResult warp_time_axis(const AudioBuffer& x, const F0Trajectory& traj, int upsample_factor) {
  const double fs = x.sample_rate();
  double log_sum = 0.0;
  std::size_t count = 0;
  for (std::size_t j = 0; j < traj.size(); ++j) {
    if (traj.is_masked(j)) continue;
    if (!(traj.f0[j] > 0.0) || !std::isfinite(traj.f0[j]))
      throw ParameterError("warp_time_axis: non-positive F0 in trajectory");
    log_sum += std::log(traj.f0[j]);
    ++count;
  }
  if (count == 0) throw ParameterError("warp_time_axis: trajectory fully masked");
  const double f0_ref = std::exp(log_sum / static_cast<double>(count));

  // Components near the frame-rate Nyquist are sampling artefacts of the
  // input estimate; left in the rate they would pass straight through T_m.
  F0Trajectory smooth = traj;
  {
    std::vector<std::size_t> idx;
    std::vector<double> ly;
    for (std::size_t j = 0; j < traj.size(); ++j)
      if (!traj.is_masked(j)) {
        idx.push_back(j);
        ly.push_back(std::log(traj.f0[j]));
      }
    const auto filtered = lowpass_knots(ly);
    for (std::size_t q = 0; q < idx.size(); ++q) smooth.f0[idx[q]] = std::exp(filtered[q]);
  }
  auto rate = trajectory_at_samples(smooth, x.size(), fs);
  for (double& r : rate) r /= f0_ref;
  TimeWarp map(std::move(rate), fs, f0_ref);

  const auto up = upsample(x.samples(), upsample_factor);
  const auto n_warped = static_cast<std::size_t>(std::floor(map.warped_end() * fs + 1e-9)) + 1;
  std::vector<double> warped(n_warped);
  const double up_rate = fs * upsample_factor;
  const long up_last = static_cast<long>(up.size()) - 1;
  for (std::size_t i = 0; i < n_warped; ++i) {
    const double t = map.to_original(static_cast<double>(i) / fs);
    const double pos = std::clamp(t * up_rate, 0.0, static_cast<double>(up_last));
    const auto p0 = static_cast<long>(pos);
    const double frac = pos - static_cast<double>(p0);
    const long p1 = std::min(p0 + 1, up_last);
    warped[i] = up[static_cast<std::size_t>(p0)] * (1.0 - frac) + up[static_cast<std::size_t>(p1)] * frac;
  }
  return {AudioBuffer(std::move(warped), fs), std::move(map)};
}

// ---------------------------------------------------------------------------
// T_m

F0Trajectory refine_warped(const AudioBuffer& x, const F0Trajectory& traj, int m,
                           const AnalysisConfig& config, HarmonicReport* report) {
  if (m < 1) throw ParameterError("refine_warped: m must be >= 1");
  const auto warp = warp_time_axis(x, traj, config.warp_upsample);
  const double fs = x.sample_rate();
  const HarmonicDetectorBank bank(warp.map.f0_ref(), m, fs);
  const auto tracks = bank.measure(warp.warped.samples(), 0, warp.warped.size());
  F0Trajectory out = traj;
  if (report) {
    report->resize(traj.size(), m);
    report->times = traj.times;
    report->f0_ref = warp.map.f0_ref();
  }
  for (std::size_t j = 0; j < traj.size(); ++j) {
    if (traj.is_masked(j)) continue;
    const double t = traj.times[j];
    const double position = warp.map.to_warped(t) * fs;
    const auto samples = sample_tracks(bank, tracks, position);
    auto combined = combine_harmonics(samples, bank.f0_ref(), config);
    if (combined) combined->first *= warp.map.rate_at(t);
    store_refined(out, j, traj.f0[j], combined, config);
    if (report) fill_report_row(*report, j, samples);
  }
  return out;
}

HarmonicReport harmonic_aperiodicity_report(const AudioBuffer& warped, double f0_ref, int m,
                                            double frame_rate) {
  const double fs = warped.sample_rate();
  const HarmonicDetectorBank bank(f0_ref, m, fs);
  const auto tracks = bank.measure(warped.samples(), 0, warped.size());
  const auto times = frame_grid(warped.size(), fs, frame_rate);
  HarmonicReport report;
  report.resize(times.size(), m);
  report.times = times;
  report.f0_ref = f0_ref;
  for (std::size_t j = 0; j < times.size(); ++j)
    fill_report_row(report, j, sample_tracks(bank, tracks, std::round(times[j] * fs)));
  return report;
}

// ---------------------------------------------------------------------------
// Pipeline

namespace {

constexpr int kFirstHarmonicPass = 3;
constexpr int kSecondHarmonicPass = 10;

PipelineResult finish_variant(const AudioBuffer& x, const InitialAnalysis& analysis,
                              const F0Trajectory* h3, const AnalysisConfig& config,
                              Variant variant) {
  PipelineResult result;
  result.variant = variant;
  result.analysis = analysis;
  if (!config.refinement_enabled || analysis.initial.unmasked_count() == 0) {
    result.refined = analysis.initial;
    return result;
  }
  result.stages.push_back(*h3);
  if (variant == Variant::kHarmonic) {
    result.stages.push_back(refine_harmonic(x, *h3, kSecondHarmonicPass, config, &result.report));
  } else {
    result.stages.push_back(refine_warped(x, *h3, kSecondHarmonicPass, config));
    result.stages.push_back(
        refine_warped(x, result.stages.back(), kSecondHarmonicPass, config, &result.report));
  }
  result.refined = result.stages.back();
  return result;
}

}  // namespace

std::vector<PipelineResult> run_pipeline_variants(const AudioBuffer& x,
                                                  const AnalysisConfig& config,
                                                  std::span<const Variant> variants) {
  const auto analysis = initial_analysis(x, config);
  std::optional<F0Trajectory> h3;
  if (config.refinement_enabled && analysis.initial.unmasked_count() > 0)
    h3 = refine_harmonic(x, analysis.initial, kFirstHarmonicPass, config);
  std::vector<PipelineResult> results;
  for (Variant v : variants)
    results.push_back(finish_variant(x, analysis, h3 ? &*h3 : nullptr, config, v));
  return results;
}

PipelineResult run_pipeline(const AudioBuffer& x, const AnalysisConfig& config, Variant variant) {
  const Variant one[] = {variant};
  return std::move(run_pipeline_variants(x, config, one).front());
}

PipelineResult run_pipeline(const AudioBuffer& x, const AnalysisConfig& config) {
  return run_pipeline(x, config, config.variant);
}

}  // namespace yangsaf
