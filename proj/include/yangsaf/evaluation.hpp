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
#include <string>
#include <vector>

#include "yangsaf/config.hpp"
#include "yangsaf/trajectory.hpp"

namespace yangsaf {

/// Truth (dense) interpolated linearly in log F0 at time t.
double truth_at(const F0Trajectory& truth, double t);

/// RMS of 1200 log2(est / truth) over unmasked frames more than
/// edge_exclusion_s from either end of the truth's support.
double rms_cent_error(const F0Trajectory& est, const F0Trajectory& truth, double edge_exclusion_s = 0.1);

/// Least-squares fit of c(t) = dc + a sin(w t) + b cos(w t).
struct SinusoidFit {
  double dc = 0.0;
  double in_phase = 0.0;    // sin coefficient
  double quadrature = 0.0;  // cos coefficient
  double amplitude() const;
  double operator()(double t, double mod_freq) const;
};
SinusoidFit fit_sinusoid(std::span<const double> times, std::span<const double> values, double mod_freq);

/// Cents of est relative to f0_mean on the frames used for scoring.
struct CentSeries {
  std::vector<double> times;
  std::vector<double> cents;
  double unmasked_fraction = 0.0;  // over the non-edge frames
};
CentSeries cent_series(const F0Trajectory& est, double f0_mean, double t_begin, double t_end,
                       double edge_exclusion_s);

/// Fitted modulation amplitude over (depth / 2).
double fmtf_gain(const CentSeries& series, double depth_cents, double mod_freq);

/// Power of what the sinusoid fit leaves, relative to the power of the
/// true modulation (depth / 2 amplitude), in dB.
double spurious_level_db(const CentSeries& series, double depth_cents, double mod_freq);

/// Frequency at which the gain crosses 1/sqrt(2), by interpolation linear in
/// log frequency between the bracketing points. When no point falls below,
/// the highest frequency is returned with is_lower_bound set.
struct Minus3dbPoint {
  double frequency = 0.0;
  bool is_lower_bound = false;
};
Minus3dbPoint minus3db_point(std::span<const double> mod_freqs, std::span<const double> gains);

struct FMTFCurve {
  std::vector<double> mod_freqs;
  std::vector<double> gain;
  std::vector<bool> reliable;  // unmasked fraction >= 80 %
  Minus3dbPoint minus3db;
};

/// RMS deviation of the per-segment least-squares line from the sinusoid
/// A sin(2 pi f t) (cents) over [0, duration), segments of length h.
double piecewise_linear_rms(double amplitude, double mod_freq, double segment_s, double duration);
/// Small-segment limit: A w^2 h^2 / (2 sqrt(180) sqrt(2)).
double piecewise_linear_rms_asymptotic(double amplitude, double mod_freq, double segment_s);

// ---------------------------------------------------------------------------
// Batteries. Each point is the median over config.seeds.

struct SnrSweepRow {
  double snr_db = 0.0;
  double rms_initial = 0.0;
  double rms_harmonic = 0.0;
  double rms_warped = 0.0;  // NaN when the T-chain is not run
};

std::vector<SnrSweepRow> snr_sweep(const AnalysisConfig& config, std::span<const double> snr_list,
                                   double f0 = 120.0, bool include_warped = false);

struct FmtfRow {
  double mod_hz = 0.0;
  double gain_harmonic = 0.0;
  double gain_warped = 0.0;
  double rms_harmonic = 0.0;
  double rms_warped = 0.0;
  double spurious_harmonic_db = 0.0;
  double spurious_warped_db = 0.0;
  double pwl_1ms = 0.0;  // piecewise-linear best-fit baselines, cents RMS
  double pwl_5ms = 0.0;
  bool reliable = true;
};

struct FmtfBattery {
  double f0_mean = 120.0;
  double depth_cents = 100.0;
  double snr_db = 100.0;
  std::vector<double> mod_freqs = {1, 2, 4, 8, 16, 32};
};

std::vector<FmtfRow> fmtf_sweep(const AnalysisConfig& config, const FmtfBattery& battery);
FMTFCurve fmtf_curve(const std::vector<FmtfRow>& rows, Variant variant);

/// Median of a copy of v (mean of the two middle values for even sizes).
double median(std::vector<double> v);

/// Fixed-order CSV with 9 significant digits.
std::string format_number(double v);
std::string snr_sweep_csv(const std::vector<SnrSweepRow>& rows);
std::string fmtf_csv(const std::vector<FmtfRow>& rows);

}  // namespace yangsaf
