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
#include <random>
#include <vector>

#include "yangsaf/audio.hpp"

namespace yangsaf::test {

inline constexpr double kFs = 22050.0;

inline std::vector<double> tone(double freq, double seconds, double fs = kFs, double amp = 1.0,
                                double phase = 0.0) {
  std::vector<double> x(static_cast<std::size_t>(std::lround(seconds * fs)));
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = amp * std::cos(kTwoPi * freq * static_cast<double>(i) / fs + phase);
  return x;
}

inline std::vector<double> harmonic_complex(double f0, int harmonics, double seconds, double fs = kFs) {
  std::vector<double> x(static_cast<std::size_t>(std::lround(seconds * fs)), 0.0);
  for (int k = 1; k <= harmonics; ++k) {
    const auto t = tone(k * f0, seconds, fs, 1.0 / k);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += t[i];
  }
  return x;
}

inline std::vector<double> gaussian(std::size_t n, std::uint64_t seed, double sd = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, sd);
  std::vector<double> v(n);
  for (double& s : v) s = d(rng);
  return v;
}

inline double power(const std::vector<double>& x) {
  double p = 0.0;
  for (double s : x) p += s * s;
  return p / static_cast<double>(x.size());
}

inline double cents(double a, double b) { return 1200.0 * std::log2(a / b); }

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) ma += a[i], mb += b[i];
  ma /= n, mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace yangsaf::test
