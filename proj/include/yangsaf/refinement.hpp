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

#include "yangsaf/audio.hpp"
#include "yangsaf/config.hpp"
#include "yangsaf/frontend.hpp"
#include "yangsaf/tracker.hpp"
#include "yangsaf/trajectory.hpp"

namespace yangsaf {

struct HarmonicDetector {
  int harmonic = 0;
  ComplexKernelPair kernels;
};

/// Detectors centered on k * f0_ref, k = 1..m (below Nyquist), all with the
/// window period 4 / f0_ref so that each one's first spectral zeros fall on
/// its neighbours (k +- 1) * f0_ref.
class HarmonicDetectorBank {
 public:
  HarmonicDetectorBank(double f0_ref, int max_harmonics, double sample_rate);

  double f0_ref() const { return f0_ref_; }
  double sample_rate() const { return sample_rate_; }
  const std::vector<HarmonicDetector>& detectors() const { return detectors_; }
  /// Context needed on each side of a sample for an exact a_ks value.
  std::size_t padding() const;

  /// Detector tracks for samples [begin, end) of x. Values equal a
  /// whole-signal run to rounding.
  struct Tracks {
    long origin = 0;  // sample index of element 0
    std::vector<ChannelTrack> per_harmonic;
  };
  Tracks measure(std::span<const double> x, std::size_t begin, std::size_t end) const;

 private:
  double f0_ref_;
  double sample_rate_;
  std::vector<HarmonicDetector> detectors_;
};

/// Per-frame, per-harmonic detector outputs. Entries for harmonics that are
/// absent (above Nyquist) or invalid hold NaN.
struct HarmonicReport {
  std::vector<double> times;
  int harmonics = 0;
  double f0_ref = 0.0;  // bank reference for warped reports, 0 otherwise
  std::vector<double> inst_freq;      // Hz, [frame][harmonic]
  std::vector<double> aperiodicity;   // smoothed residual power ratio
  std::vector<double> snr_db;

  std::size_t frames() const { return times.size(); }
  std::size_t index(std::size_t frame, int k) const {
    return frame * static_cast<std::size_t>(harmonics) + static_cast<std::size_t>(k - 1);
  }
  void resize(std::size_t frames, int m);
};

/// In-band SNR implied by a smoothed aperiodicity value, from the
/// calibration table (log-linear between rows, slope -10 dB/decade beyond
/// the high-SNR end, clamped at the low end).
double aperiodicity_to_snr_db(double a_ks);

/// H_m: combine f_k / k over harmonics 1..m with minimum-variance weights.
F0Trajectory refine_harmonic(const AudioBuffer& x, const F0Trajectory& traj, int m,
                             const AnalysisConfig& config, HarmonicReport* report = nullptr);

/// Piecewise-linear time map tau(t) with d tau/dt = f0(t) / f0_ref, tabulated
/// at every original sample.
class TimeWarp {
 public:
  TimeWarp(std::vector<double> rate, double sample_rate, double f0_ref);

  double to_warped(double t) const;
  double to_original(double tau) const;
  double rate_at(double t) const;
  double f0_ref() const { return f0_ref_; }
  double warped_end() const { return tau_.back(); }
  std::span<const double> tau_samples() const { return tau_; }

 private:
  std::vector<double> rate_;
  std::vector<double> tau_;
  double sample_rate_;
  double f0_ref_;
};

struct WarpResult {
  AudioBuffer warped;
  TimeWarp map;
};

/// F0 per audio sample: natural cubic spline in ln F0 through unmasked
/// frames, straight lines in ln F0 across masked gaps, held at the ends.
std::vector<double> trajectory_at_samples(const F0Trajectory& traj, std::size_t n_samples,
                                          double sample_rate);

/// Windowed-sinc interpolation by an integer factor; original samples are
/// reproduced exactly.
std::vector<double> upsample(std::span<const double> x, int factor);

/// Resamples x onto a time axis on which the trajectory's F0 is constant at
/// its geometric mean. Throws ParameterError on non-positive F0.
WarpResult warp_time_axis(const AudioBuffer& x, const F0Trajectory& traj, int upsample_factor = 4);

/// T_m: H_m with a fixed bank on the warped signal, mapped back through the
/// warp rate.
F0Trajectory refine_warped(const AudioBuffer& x, const F0Trajectory& traj, int m,
                           const AnalysisConfig& config, HarmonicReport* report = nullptr);

/// Harmonic detector outputs of an already warped signal on its own frame grid.
HarmonicReport harmonic_aperiodicity_report(const AudioBuffer& warped, double f0_ref, int m,
                                            double frame_rate);

struct PipelineResult {
  Variant variant = Variant::kHarmonic;
  InitialAnalysis analysis;
  std::vector<F0Trajectory> stages;  // after each operator, in application order
  F0Trajectory refined;
  HarmonicReport report;
};

/// Runs P_X then H_10 . H_3 (kHarmonic) or T_10 . T_10 . H_3 (kWarped).
PipelineResult run_pipeline(const AudioBuffer& x, const AnalysisConfig& config, Variant variant);
PipelineResult run_pipeline(const AudioBuffer& x, const AnalysisConfig& config);

/// Several variants from one shared P_X and H_3 pass.
std::vector<PipelineResult> run_pipeline_variants(const AudioBuffer& x,
                                                  const AnalysisConfig& config,
                                                  std::span<const Variant> variants);

}  // namespace yangsaf
