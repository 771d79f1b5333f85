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
#include <cstddef>
#include <cstdint>
#include <vector>

namespace yangsaf {

/// Per-frame status bits of an F0Trajectory.
enum FrameFlag : std::uint8_t {
  kFlagNone = 0,
  kFlagLowConfidence = 1 << 0,  // tracker carried the previous channel
  kFlagNoHarmonics = 1 << 1,    // refinement had no usable harmonic
  kFlagSanityGate = 1 << 2,     // refinement result rejected (> gate from input)
};

/// F0 estimate sampled on a time grid. Masked frames carry f0 = NaN.
struct F0Trajectory {
  std::vector<double> times;          // s, strictly increasing
  std::vector<double> f0;             // Hz
  std::vector<double> variance;       // (ln Hz)^2
  std::vector<int> source_channel;    // -1 when not applicable
  std::vector<std::uint8_t> masked;
  std::vector<std::uint8_t> flags;

  std::size_t size() const { return times.size(); }
  bool is_masked(std::size_t i) const { return masked[i] != 0; }

  void resize(std::size_t n) {
    times.resize(n, 0.0);
    f0.resize(n, std::nan(""));
    variance.resize(n, std::nan(""));
    source_channel.resize(n, -1);
    masked.resize(n, 1);
    flags.resize(n, kFlagNone);
  }

  void set(std::size_t i, double value, double var) {
    f0[i] = value;
    variance[i] = var;
    masked[i] = 0;
  }

  void mask(std::size_t i) {
    f0[i] = std::nan("");
    variance[i] = std::nan("");
    masked[i] = 1;
  }

  std::size_t unmasked_count() const {
    std::size_t n = 0;
    for (auto m : masked) n += m ? 0 : 1;
    return n;
  }
};

}  // namespace yangsaf
