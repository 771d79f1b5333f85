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
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace yangsaf {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Raised for out-of-range or inconsistent arguments.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an analysis cannot produce a result from the given signal.
class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by file readers and writers.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mono real-valued signal with its sampling rate.
class AudioBuffer {
 public:
  AudioBuffer(std::vector<double> samples, double sample_rate)
      : samples_(std::move(samples)), sample_rate_(sample_rate) {
    if (!(sample_rate_ > 0.0) || !std::isfinite(sample_rate_))
      throw ParameterError("AudioBuffer: sample_rate must be positive");
    if (samples_.empty())
      throw ParameterError("AudioBuffer: at least one sample required");
    for (double s : samples_)
      if (!std::isfinite(s))
        throw ParameterError("AudioBuffer: non-finite sample");
  }

  std::span<const double> samples() const { return samples_; }
  double sample_rate() const { return sample_rate_; }
  std::size_t size() const { return samples_.size(); }
  double duration() const { return static_cast<double>(samples_.size()) / sample_rate_; }
  double operator[](std::size_t i) const { return samples_[i]; }

  AudioBuffer scaled(double gain) const {
    std::vector<double> out(samples_);
    for (double& s : out) s *= gain;
    return AudioBuffer(std::move(out), sample_rate_);
  }

 private:
  std::vector<double> samples_;
  double sample_rate_;
};

}  // namespace yangsaf
