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
#include "yangsaf/evaluation.hpp"
#include "yangsaf/frontend.hpp"
#include "yangsaf/probability.hpp"

using namespace yangsaf;
using test::kFs;

namespace {

// Interior samples, away from the kernel's reach into the edges.
template <typename F>
void for_interior(const ChannelTrack& t, double fc, F&& f) {
  const auto margin = static_cast<std::size_t>(std::ceil(6.0 * kFs / fc));
  for (std::size_t i = margin; i + margin < t.size(); ++i) f(i);
}

}  // namespace

TEST_CASE("channel layout: 56 channels from 40 Hz at a semitone spacing") {
  const auto l = design_channels(40.0, 1000.0, 12, kFs);
  REQUIRE(l.size() == 56);
  CHECK(l.centers.front() == doctest::Approx(40.0));
  for (std::size_t k = 1; k < l.size(); ++k)
    CHECK(l.centers[k] / l.centers[k - 1] == doctest::Approx(std::exp2(1.0 / 12.0)).epsilon(1e-12));
  CHECK(l.centers.back() <= 1000.0);
  const auto one = design_channels(50.0, 100.0, 1, kFs);
  REQUIRE(one.size() == 2);
  CHECK(one.centers[1] == doctest::Approx(100.0));
}

TEST_CASE("channel layout: bands tile exactly and bad ranges are rejected") {
  const auto l = design_channels(40.0, 1000.0, 12, kFs);
  for (std::size_t k = 0; k + 1 < l.size(); ++k)
    CHECK(std::abs(l.band_high(k) - l.band_low(k + 1)) <= 1e-12 * l.band_high(k));
  CHECK(l.nearest(121.0) == 19);  // 40 * 2^(19/12) = 119.87
  CHECK_THROWS_AS(design_channels(1000.0, 40.0, 12, kFs), ParameterError);
  CHECK_THROWS_AS(design_channels(40.0, 1000.0, 12, 1500.0), ParameterError);
}

TEST_CASE("flanagan_if: exact on an analytic exponential, scale invariant") {
  const double w = kTwoPi * 123.4;
  const Complex x = std::polar(0.37, 1.1);
  const Complex xd = Complex(0.0, w) * x;
  REQUIRE(flanagan_if(x, xd).has_value());
  CHECK(*flanagan_if(x, xd) == doctest::Approx(w).epsilon(1e-14));
  for (double c : {1e-6, 0.5, 3.0, 1e6}) {
    const double v = *flanagan_if(c * x, c * xd);
    CHECK(std::abs(v - *flanagan_if(x, xd)) <= 1e-9 * w);
  }
  CHECK_FALSE(flanagan_if(Complex(0.0, 0.0), Complex(1.0, 1.0)).has_value());
}

TEST_CASE("detector IF is exact on pure tones and amplitude invariant") {
  for (auto [fc, f] : {std::pair{100.0, 100.0}, std::pair{100.0, 108.0}, std::pair{400.0, 377.0}}) {
    const AudioBuffer x(test::tone(f, 1.0), kFs);
    const auto t = channel_aperiodicity(x, fc);
    const auto t2 = channel_aperiodicity(x.scaled(7.5), fc);
    double worst = 0.0, worst_scale = 0.0;
    for_interior(t, fc, [&](std::size_t i) {
      worst = std::max(worst, std::abs(t.inst_freq[i] - f) / f);
      worst_scale = std::max(worst_scale, std::abs(t2.inst_freq[i] - t.inst_freq[i]) / f);
    });
    CHECK(worst <= 1e-4);
    CHECK(worst_scale <= 1e-9);
  }
}

TEST_CASE("detector IF follows a linear chirp") {
  // 100 -> 150 Hz over 1 s; phase by exact integral.
  std::vector<double> x(static_cast<std::size_t>(kFs));
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = static_cast<double>(i) / kFs;
    x[i] = std::cos(kTwoPi * (100.0 * t + 25.0 * t * t));
  }
  const auto t = channel_aperiodicity(AudioBuffer(x, kFs), 125.0);
  const std::size_t mid = x.size() / 2;
  CHECK(t.inst_freq[mid] == doctest::Approx(125.0).epsilon(0.5 / 125.0));
}

TEST_CASE("aperiodicity vanishes on pure tones") {
  for (double fc : {60.0, 150.0, 500.0}) {
    const auto t = channel_aperiodicity(AudioBuffer(test::tone(fc, 1.0), kFs), fc);
    double worst = 0.0;
    for_interior(t, fc, [&](std::size_t i) { worst = std::max(worst, t.aperiodicity_smoothed[i]); });
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("aperiodicity decreases with SNR") {
  const double fc = 200.0;
  std::vector<double> snr, level;
  for (double s : {0.0, 10.0, 20.0, 30.0}) {
    std::vector<double> trials;
    for (int trial = 0; trial < 20; ++trial) {
      auto x = test::tone(fc, 0.5);
      const double sd = std::sqrt(0.5 * std::pow(10.0, -s / 10.0));
      const auto n = test::gaussian(x.size(), 100 + static_cast<std::uint64_t>(trial), sd);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] += n[i];
      const auto t = channel_aperiodicity(AudioBuffer(x, kFs), fc);
      std::vector<double> a;
      for_interior(t, fc, [&](std::size_t i) { a.push_back(t.aperiodicity_smoothed[i]); });
      trials.push_back(median(a));
    }
    snr.push_back(s);
    level.push_back(10.0 * std::log10(median(trials)));
  }
  for (std::size_t i = 1; i < level.size(); ++i) CHECK(level[i] < level[i - 1]);
  CHECK(test::pearson(snr, level) <= -0.99);
}

TEST_CASE("aperiodicity falls as a secondary tone gets weaker") {
  const double fc = 200.0;
  double previous = 1e9;
  for (double db : {-10.0, -20.0, -30.0, -40.0}) {
    auto x = test::tone(1.14 * fc, 0.5);
    const auto y = test::tone(0.8 * fc, 0.5, kFs, std::pow(10.0, db / 20.0));
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
    const auto t = channel_aperiodicity(AudioBuffer(x, kFs), fc);
    std::vector<double> a;
    for_interior(t, fc, [&](std::size_t i) { a.push_back(t.aperiodicity_smoothed[i]); });
    const double m = median(a);
    CHECK(m < previous);
    previous = m;
  }
}

TEST_CASE("equivalent suppression filter") {
  const auto l = design_channels(40.0, 1000.0, 12, kFs);
  const double fc = l.centers[20];
  CHECK(equivalent_suppression_gain(l, fc, fc, kFs) <= -120.0);
  CHECK(equivalent_suppression_gain(l, fc, 2.0 * fc, kFs) <= -60.0);
  // Rising away from the dominant component.
  const double g1 = equivalent_suppression_gain(l, fc, 1.05 * fc, kFs);
  const double g2 = equivalent_suppression_gain(l, fc, 1.2 * fc, kFs);
  const double g3 = equivalent_suppression_gain(l, fc, 0.8 * fc, kFs);
  const double g4 = equivalent_suppression_gain(l, fc, 0.95 * fc, kFs);
  CHECK(g1 < g2);
  CHECK(g4 < g3);
  CHECK_THROWS_AS(equivalent_suppression_gain(l, fc, 0.6 * kFs, kFs), ParameterError);
}

TEST_CASE("frame maps: 120 Hz tone, grid spacing, amplitude invariance") {
  AnalysisConfig cfg;
  const AudioBuffer x(test::tone(120.0, 1.0), kFs);
  const auto m = analyze_frontend(x, cfg);
  REQUIRE(m.frames() == frame_grid(x.size(), kFs, 200.0).size());
  for (std::size_t j = 1; j < m.frames(); ++j)
    CHECK(m.frame_times[j] - m.frame_times[j - 1] == doctest::Approx(0.005).epsilon(1e-12));
  const std::size_t c = m.layout.nearest(120.0);
  for (std::size_t j = 40; j + 40 < m.frames(); ++j)
    CHECK(m.if_map[m.index(j, c)] == doctest::Approx(120.0).epsilon(1e-3));

  // IF is a ratio of filter outputs: any gain cancels to rounding.
  const auto s = analyze_frontend(x.scaled(0.01), cfg);
  double worst = 0.0;
  for (std::size_t i = 0; i < m.if_map.size(); ++i) {
    if (m.masked[i] != s.masked[i]) worst = 1.0;
    if (!m.masked[i]) worst = std::max(worst, std::abs(m.if_map[i] - s.if_map[i]) / m.if_map[i]);
  }
  CHECK(worst <= 1e-9);
  // A power-of-two gain commutes with every floating-point step, so the
  // maps must match exactly; any absolute threshold would show up here.
  const auto p = analyze_frontend(x.scaled(std::ldexp(1.0, -7)), cfg);
  CHECK(p.masked == m.masked);
  CHECK(p.ap_map == m.ap_map);
}

TEST_CASE("frame maps: silence is fully masked") {
  AnalysisConfig cfg;
  const auto m = analyze_frontend(AudioBuffer(std::vector<double>(11025, 0.0), kFs), cfg);
  CHECK(std::all_of(m.masked.begin(), m.masked.end(), [](auto v) { return v != 0; }));
  CHECK(std::all_of(m.ap_map.begin(), m.ap_map.end(), [](double a) { return a == 1.0; }));
}

TEST_CASE("frame maps: channels between F0 and the second harmonic report F0") {
  AnalysisConfig cfg;
  const auto m = analyze_frontend(AudioBuffer(test::harmonic_complex(120.0, 3, 1.0), kFs), cfg);
  const std::size_t j = m.frames() / 2;
  for (std::size_t c = 0; c < m.channels(); ++c) {
    const double fc = m.layout.centers[c];
    if (fc < 110.0 || fc > 140.0) continue;  // beyond, 2 f0 pulls the IF up
    CHECK(m.if_map[m.index(j, c)] == doctest::Approx(120.0).epsilon(0.02));
  }
}

TEST_CASE("detector tracks are shift covariant") {
  const double fc = 150.0;
  auto x = test::harmonic_complex(130.0, 4, 0.6);
  const auto n = test::gaussian(x.size(), 9, 0.05);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += n[i];
  const std::size_t shift = 37;
  std::vector<double> y(shift, 0.0);
  y.insert(y.end(), x.begin(), x.end());
  const auto a = channel_aperiodicity(AudioBuffer(x, kFs), fc);
  const auto b = channel_aperiodicity(AudioBuffer(y, kFs), fc);
  double worst = 0.0;
  for_interior(a, fc, [&](std::size_t i) {
    worst = std::max(worst, std::abs(a.inst_freq[i] - b.inst_freq[i + shift]));
    worst = std::max(worst, std::abs(a.aperiodicity_smoothed[i] - b.aperiodicity_smoothed[i + shift]));
  });
  CHECK(worst <= 1e-8);
}
