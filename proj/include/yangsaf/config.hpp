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

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "yangsaf/calibration.hpp"

namespace yangsaf {

/// Refinement composition applied after the initial estimate.
enum class Variant {
  kHarmonic,  // H_10 . H_3
  kWarped,    // T_10 . T_10 . H_3
};

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

/// Complete parameter set of an analysis run. Every field has a default;
/// the JSON form written by to_json() reads back to an identical value.
struct AnalysisConfig {
  // Front-end channel layout.
  double f_lo = 40.0;
  double f_hi = 1000.0;
  int channels_per_octave = 12;
  double frame_rate = 200.0;

  // Observation probability.
  double sigma_scale = kSigmaScale;
  double sigma_min = std::log(2.0) / 48.0;  // quarter of the K=12 channel spacing

  // Tracking.
  double range_octaves_below = 1.3;
  double range_octaves_above = 1.2;
  int histogram_bins = 600;
  double smoothing_window_s = 0.045;
  double gate_octaves = 0.7;
  double local_max_radius_octaves = 0.35;
  int carry_limit_frames = 5;

  // Refinement.
  Variant variant = Variant::kWarped;
  bool refinement_enabled = true;
  bool harmonic_variance_over_k2 = true;
  double bank_step_semitones = 0.25;
  int warp_upsample = 4;
  double sanity_gate_octaves = 0.5;

  // Evaluation batteries.
  double battery_duration_s = 3.0;
  double battery_sample_rate = 22050.0;
  double edge_exclusion_s = 0.1;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};

  void validate() const;
  bool operator==(const AnalysisConfig&) const = default;
};

std::string config_to_json(const AnalysisConfig& config);
AnalysisConfig config_from_json(const std::string& text);

/// 64-bit FNV-1a digest of the canonical JSON form, as 16 hex digits.
std::string config_digest(const AnalysisConfig& config);

}  // namespace yangsaf
