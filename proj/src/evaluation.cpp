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

#include "yangsaf/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "yangsaf/refinement.hpp"
#include "yangsaf/testgen.hpp"

namespace yangsaf {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kReliableFraction = 0.8;

// Integral of (y - line)^2 over a segment by composite Simpson; the line is
// the closed-form least-squares fit, so only the error integral is numeric.
double segment_residual_energy(double amplitude, double w, double t0, double h) {
  const double c = t0 + 0.5 * h;
  const double s = std::sin(w * c);
  const double co = std::cos(w * c);
  const double half = 0.5 * h;
  // <y,1> / h and <y,u> / (h^3/12) with u = t - c.
  const double mean = amplitude * s * 2.0 * std::sin(w * half) / (w * h);
  const double moment = amplitude * co * 2.0 * (std::sin(w * half) / (w * w) - half * std::cos(w * half) / w);
  const double slope = moment / (h * h * h / 12.0);
  constexpr int kIntervals = 64;
  const double du = h / kIntervals;
  double acc = 0.0;
  for (int i = 0; i <= kIntervals; ++i) {
    const double u = -half + i * du;
    const double e = amplitude * std::sin(w * (c + u)) - (mean + slope * u);
    const double weight = (i == 0 || i == kIntervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += weight * e * e;
  }
  return acc * du / 3.0;
}


}  // namespace

double truth_at(const F0Trajectory& truth, double t) {
  const auto& ts = truth.times;
  if (ts.empty()) throw ParameterError("truth_at: empty truth");
  if (t <= ts.front()) return truth.f0.front();
  if (t >= ts.back()) return truth.f0.back();
  const auto it = std::upper_bound(ts.begin(), ts.end(), t);
  const auto i = static_cast<std::size_t>(it - ts.begin()) - 1;
  const double frac = (t - ts[i]) / (ts[i + 1] - ts[i]);
  return std::exp(std::log(truth.f0[i]) + frac * (std::log(truth.f0[i + 1]) - std::log(truth.f0[i])));
}

// NaN when every frame in the scored span is masked.
double rms_cent_error(const F0Trajectory& est, const F0Trajectory& truth, double edge_exclusion_s) {
  if (truth.size() == 0 || est.size() == 0) throw ParameterError("rms_cent_error: empty trajectory");
  const double lo = std::max(truth.times.front(), est.times.front()) + edge_exclusion_s;
  const double hi = std::min(truth.times.back(), est.times.back()) - edge_exclusion_s;
  if (!(hi > lo)) throw ParameterError("rms_cent_error: trajectories do not overlap");
  double acc = 0.0;
  std::size_t n = 0;
  for (std::size_t j = 0; j < est.size(); ++j) {
    const double t = est.times[j];
    if (t < lo || t > hi || est.is_masked(j)) continue;
    const double c = 1200.0 * std::log2(est.f0[j] / truth_at(truth, t));
    acc += c * c;
    ++n;
  }
  return n ? std::sqrt(acc / static_cast<double>(n)) : kNaN;
}

double SinusoidFit::amplitude() const { return std::hypot(in_phase, quadrature); }

double SinusoidFit::operator()(double t, double mod_freq) const {
  const double w = kTwoPi * mod_freq;
  return dc + in_phase * std::sin(w * t) + quadrature * std::cos(w * t);
}

SinusoidFit fit_sinusoid(std::span<const double> times, std::span<const double> values, double mod_freq) {
  if (times.size() != values.size()) throw ParameterError("fit_sinusoid: length mismatch");
  if (times.size() < 3) throw ParameterError("fit_sinusoid: need at least three points");
  const double w = kTwoPi * mod_freq;
  Eigen::MatrixXd a(static_cast<Eigen::Index>(times.size()), 3);
  Eigen::VectorXd b(static_cast<Eigen::Index>(times.size()));
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    a(r, 0) = 1.0;
    a(r, 1) = std::sin(w * times[i]);
    a(r, 2) = std::cos(w * times[i]);
    b(r) = values[i];
  }
  const Eigen::Vector3d x = a.colPivHouseholderQr().solve(b);
  return {x(0), x(1), x(2)};
}

CentSeries cent_series(const F0Trajectory& est, double f0_mean, double t_begin, double t_end,
                       double edge_exclusion_s) {
  CentSeries s;
  std::size_t total = 0;
  for (std::size_t j = 0; j < est.size(); ++j) {
    const double t = est.times[j];
    if (t < t_begin + edge_exclusion_s || t > t_end - edge_exclusion_s) continue;
    ++total;
    if (est.is_masked(j)) continue;
    s.times.push_back(t);
    s.cents.push_back(1200.0 * std::log2(est.f0[j] / f0_mean));
  }
  s.unmasked_fraction = total ? static_cast<double>(s.times.size()) / static_cast<double>(total) : 0.0;
  return s;
}

double fmtf_gain(const CentSeries& series, double depth_cents, double mod_freq) {
  if (!(depth_cents > 0.0)) throw ParameterError("fmtf_gain: depth must be positive");
  if (series.times.size() < 3) return kNaN;
  return fit_sinusoid(series.times, series.cents, mod_freq).amplitude() / (0.5 * depth_cents);
}

double spurious_level_db(const CentSeries& series, double depth_cents, double mod_freq) {
  if (!(depth_cents > 0.0)) throw ParameterError("spurious_level_db: depth must be positive");
  if (series.times.size() < 3) return kNaN;
  const auto fit = fit_sinusoid(series.times, series.cents, mod_freq);
  double acc = 0.0;
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    const double r = series.cents[i] - fit(series.times[i], mod_freq);
    acc += r * r;
  }
  const double residual = acc / static_cast<double>(series.times.size());
  const double amplitude = 0.5 * depth_cents;
  return 10.0 * std::log10(std::max(residual, 1e-300) / (0.5 * amplitude * amplitude));
}

Minus3dbPoint minus3db_point(std::span<const double> mod_freqs, std::span<const double> gains) {
  if (mod_freqs.size() != gains.size() || mod_freqs.empty())
    throw ParameterError("minus3db_point: need matching, non-empty inputs");
  const double target = 1.0 / std::sqrt(2.0);
  if (!(gains[0] >= target)) return {mod_freqs[0], false};
  for (std::size_t i = 1; i < gains.size(); ++i) {
    if (gains[i] < target || std::isnan(gains[i])) {
      if (std::isnan(gains[i])) return {mod_freqs[i - 1], true};
      const double frac = (gains[i - 1] - target) / (gains[i - 1] - gains[i]);
      const double l0 = std::log(mod_freqs[i - 1]);
      const double l1 = std::log(mod_freqs[i]);
      return {std::exp(l0 + frac * (l1 - l0)), false};
    }
  }
  return {mod_freqs.back(), true};
}

double piecewise_linear_rms(double amplitude, double mod_freq, double segment_s, double duration) {
  if (!(segment_s > 0.0) || !(duration > 0.0) || !(mod_freq > 0.0))
    throw ParameterError("piecewise_linear_rms: positive segment, duration and frequency required");
  const double w = kTwoPi * mod_freq;
  double energy = 0.0;
  for (double t0 = 0.0; t0 < duration - 1e-12; t0 += segment_s)
    energy += segment_residual_energy(amplitude, w, t0, std::min(segment_s, duration - t0));
  return std::sqrt(energy / duration);
}

double piecewise_linear_rms_asymptotic(double amplitude, double mod_freq, double segment_s) {
  const double w = kTwoPi * mod_freq;
  return amplitude * w * w * segment_s * segment_s / (2.0 * std::sqrt(180.0) * std::sqrt(2.0));
}

double median(std::vector<double> v) {
  if (v.empty()) return kNaN;
  // NaN (failed runs) sorts above every number.
  std::sort(v.begin(), v.end(), [](double a, double b) {
    if (std::isnan(a)) return false;
    if (std::isnan(b)) return true;
    return a < b;
  });
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<SnrSweepRow> snr_sweep(const AnalysisConfig& config, std::span<const double> snr_list,
                                   double f0, bool include_warped) {
  config.validate();
  std::vector<Variant> variants = {Variant::kHarmonic};
  if (include_warped) variants.push_back(Variant::kWarped);
  std::vector<SnrSweepRow> rows;
  for (double snr : snr_list) {
    std::vector<double> initial, harmonic, warped;
    for (auto seed : config.seeds) {
      TestSignalSpec spec;
      spec.f0_mean = f0;
      spec.duration = config.battery_duration_s;
      spec.sample_rate = config.battery_sample_rate;
      spec.snr_db = snr;
      spec.seed = seed;
      const auto [x, truth] = synthesize(spec);
      const auto results = run_pipeline_variants(x, config, variants);
      initial.push_back(rms_cent_error(results[0].analysis.initial, truth, config.edge_exclusion_s));
      harmonic.push_back(rms_cent_error(results[0].refined, truth, config.edge_exclusion_s));
      if (include_warped) warped.push_back(rms_cent_error(results[1].refined, truth, config.edge_exclusion_s));
    }
    rows.push_back({snr, median(initial), median(harmonic), include_warped ? median(warped) : kNaN});
  }
  return rows;
}

std::vector<FmtfRow> fmtf_sweep(const AnalysisConfig& config, const FmtfBattery& battery) {
  config.validate();
  const Variant variants[] = {Variant::kHarmonic, Variant::kWarped};
  std::vector<FmtfRow> rows;
  for (double mod : battery.mod_freqs) {
    std::vector<double> gain_h, gain_t, rms_h, rms_t, spur_h, spur_t;
    bool reliable = true;
    for (auto seed : config.seeds) {
      TestSignalSpec spec;
      spec.f0_mean = battery.f0_mean;
      spec.depth_cents = battery.depth_cents;
      spec.mod_freq = mod;
      spec.duration = config.battery_duration_s;
      spec.sample_rate = config.battery_sample_rate;
      spec.snr_db = battery.snr_db;
      spec.seed = seed;
      const auto [x, truth] = synthesize(spec);
      const auto results = run_pipeline_variants(x, config, variants);
      const double t_end = truth.times.back();
      for (std::size_t v = 0; v < 2; ++v) {
        const auto series = cent_series(results[v].refined, battery.f0_mean, 0.0, t_end, config.edge_exclusion_s);
        reliable = reliable && series.unmasked_fraction >= kReliableFraction;
        const double gain = fmtf_gain(series, battery.depth_cents, mod);
        const double rms = rms_cent_error(results[v].refined, truth, config.edge_exclusion_s);
        const double spur = spurious_level_db(series, battery.depth_cents, mod);
        (v == 0 ? gain_h : gain_t).push_back(gain);
        (v == 0 ? rms_h : rms_t).push_back(rms);
        (v == 0 ? spur_h : spur_t).push_back(spur);
      }
    }
    const double amplitude = 0.5 * battery.depth_cents;
    rows.push_back({mod, median(gain_h), median(gain_t), median(rms_h), median(rms_t), median(spur_h),
                    median(spur_t), piecewise_linear_rms(amplitude, mod, 0.001, config.battery_duration_s),
                    piecewise_linear_rms(amplitude, mod, 0.005, config.battery_duration_s), reliable});
  }
  return rows;
}

FMTFCurve fmtf_curve(const std::vector<FmtfRow>& rows, Variant variant) {
  FMTFCurve curve;
  for (const auto& r : rows) {
    curve.mod_freqs.push_back(r.mod_hz);
    curve.gain.push_back(variant == Variant::kHarmonic ? r.gain_harmonic : r.gain_warped);
    curve.reliable.push_back(r.reliable);
  }
  curve.minus3db = minus3db_point(curve.mod_freqs, curve.gain);
  return curve;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string snr_sweep_csv(const std::vector<SnrSweepRow>& rows) {
  std::ostringstream out;
  out << "snr_db,rms_cents_initial,rms_cents_H,rms_cents_T\n";
  for (const auto& r : rows)
    out << format_number(r.snr_db) << ',' << format_number(r.rms_initial) << ','
        << format_number(r.rms_harmonic) << ',' << format_number(r.rms_warped) << '\n';
  return out.str();
}

std::string fmtf_csv(const std::vector<FmtfRow>& rows) {
  std::ostringstream out;
  out << "mod_hz,gain_H,gain_T,rms_cents_H,rms_cents_T,spurious_db_H,spurious_db_T,pwl_1ms_cents,pwl_5ms_cents,reliable\n";
  for (const auto& r : rows)
    out << format_number(r.mod_hz) << ',' << format_number(r.gain_harmonic) << ','
        << format_number(r.gain_warped) << ',' << format_number(r.rms_harmonic) << ','
        << format_number(r.rms_warped) << ',' << format_number(r.spurious_harmonic_db) << ','
        << format_number(r.spurious_warped_db) << ',' << format_number(r.pwl_1ms) << ','
        << format_number(r.pwl_5ms) << ',' << (r.reliable ? 1 : 0) << '\n';
  return out.str();
}

}  // namespace yangsaf
