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
#include <optional>
#include <utility>

#include "yangsaf/audio.hpp"
#include "yangsaf/trajectory.hpp"

namespace yangsaf {

/// Harmonic complex with sinusoidal F0 modulation on the log-frequency axis:
///   f0(t) = f0_mean * 2^((depth / 2400) * sin(2 pi mod_freq t)).
struct TestSignalSpec {
  double f0_mean = 120.0;
  double depth_cents = 0.0;     // peak-to-peak
  double mod_freq = 0.0;        // Hz
  int n_harmonics = 0;          // 0: every harmonic below 0.9 * Nyquist at the F0 peak
  double harmonic_slope_db = -6.0;  // per octave of harmonic number
  double duration = 3.0;        // s
  double sample_rate = 22050.0;
  std::optional<double> snr_db;  // white noise, none when empty
  std::uint64_t seed = 1;

  double f0_max() const;
  /// Resolved harmonic count (applies the n_harmonics = 0 rule).
  int harmonic_count() const;
  void validate() const;
};

/// Instantaneous F0 and its exact integral (cycles) at time t.
double test_f0(const TestSignalSpec& spec, double t);
double test_phase_cycles(const TestSignalSpec& spec, double t);

/// Signal and its analytic F0 at every audio sample.
std::pair<AudioBuffer, F0Trajectory> synthesize(const TestSignalSpec& spec);

/// x plus white Gaussian noise scaled to exactly snr_db below x's power.
AudioBuffer add_noise(const AudioBuffer& x, double snr_db, std::uint64_t seed);

/// Gaussian white noise of the given length, power 1 (exactly).
std::vector<double> unit_noise(std::size_t n, std::uint64_t seed);

}  // namespace yangsaf
