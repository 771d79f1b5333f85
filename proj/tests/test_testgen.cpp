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

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "yangsaf/fft.hpp"
#include "yangsaf/testgen.hpp"

using namespace yangsaf;

TEST_CASE("F0 modulation depth is peak-to-peak") {
  TestSignalSpec s;
  s.depth_cents = 100;
  s.mod_freq = 4;
  double lo = 1e9, hi = 0.0;
  for (double t = 0.0; t < 1.0; t += 1e-4) {
    lo = std::min(lo, test_f0(s, t));
    hi = std::max(hi, test_f0(s, t));
  }
  CHECK(test::cents(hi, lo) == doctest::Approx(100.0).epsilon(1e-6));
  CHECK(hi == doctest::Approx(s.f0_max()).epsilon(1e-9));
}

TEST_CASE("phase is the integral of F0") {
  TestSignalSpec s;
  s.depth_cents = 300;
  s.mod_freq = 13;
  const double dt = 1e-5;
  double worst = 0.0;
  for (double t = 0.01; t < 2.0; t += 0.0137) {
    const double d = (test_phase_cycles(s, t + dt) - test_phase_cycles(s, t - dt)) / (2 * dt);
    worst = std::max(worst, std::abs(d - test_f0(s, t)) / test_f0(s, t));
  }
  CHECK(worst <= 1e-6);
  CHECK(test_phase_cycles(s, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("harmonic count fills to 0.9 Nyquist") {
  TestSignalSpec s;
  CHECK(s.harmonic_count() == 82);
  s.n_harmonics = 5;
  CHECK(s.harmonic_count() == 5);
}

TEST_CASE("noise is added at the requested SNR") {
  TestSignalSpec s;
  s.duration = 1.0;
  const auto [clean, truth] = synthesize(s);
  for (double snr : {-10.0, 0.0, 20.0}) {
    const auto noisy = add_noise(clean, snr, 9);
    std::vector<double> n(clean.size());
    for (std::size_t i = 0; i < n.size(); ++i) n[i] = noisy[i] - clean[i];
    const std::vector<double> c(clean.samples().begin(), clean.samples().end());
    CHECK(std::abs(10 * std::log10(test::power(c) / test::power(n)) - snr) <= 0.1);
  }
  CHECK(test::power(unit_noise(1000, 3)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("synthesis is deterministic in the seed") {
  TestSignalSpec s;
  s.duration = 0.3;
  s.snr_db = 10;
  const auto a = synthesize(s).first;
  const auto b = synthesize(s).first;
  s.seed = 2;
  const auto c = synthesize(s).first;
  bool same = true, differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    same = same && a[i] == b[i];
    differs = differs || a[i] != c[i];
  }
  CHECK(same);
  CHECK(differs);
}

TEST_CASE("truth trajectory is sampled at audio rate") {
  TestSignalSpec s;
  s.depth_cents = 50;
  s.mod_freq = 3;
  s.duration = 0.5;
  const auto [x, truth] = synthesize(s);
  REQUIRE(truth.size() == x.size());
  for (std::size_t i = 0; i < truth.size(); i += 97) {
    CHECK(truth.times[i] == doctest::Approx(static_cast<double>(i) / s.sample_rate));
    CHECK(truth.f0[i] == doctest::Approx(test_f0(s, truth.times[i])));
  }
}

TEST_CASE("invalid specs are rejected") {
  TestSignalSpec s;
  s.n_harmonics = 100;  // 100 * 120 Hz > Nyquist
  CHECK_THROWS_AS(synthesize(s), ParameterError);
  s = {};
  s.f0_mean = -1;
  CHECK_THROWS_AS(s.validate(), ParameterError);
  s = {};
  s.duration = 0;
  CHECK_THROWS_AS(s.validate(), ParameterError);
}

TEST_CASE("constant F0 synthesis is spectrally pure") {
  TestSignalSpec s;
  s.f0_mean = 110.0;  // whole cycles in one second: every harmonic on a bin
  s.n_harmonics = 10;
  s.duration = 1.0;
  const auto [x, truth] = synthesize(s);
  std::vector<Complex> spec(x.samples().begin(), x.samples().end());
  fft_forward(spec);
  const std::size_t n = spec.size();
  double signal = 0.0, other = 0.0;
  for (std::size_t b = 1; b < n / 2; ++b) {
    const double p = std::norm(spec[b]);
    const double hz = static_cast<double>(b) * s.sample_rate / static_cast<double>(n);
    const double k = hz / s.f0_mean;
    if (std::abs(k - std::round(k)) < 1e-9 && std::round(k) <= 10) signal += p;
    else other += p;
  }
  CHECK(10 * std::log10(other / signal) <= -100.0);
}
