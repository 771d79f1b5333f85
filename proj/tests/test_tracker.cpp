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
#include "yangsaf/probability.hpp"
#include "yangsaf/testgen.hpp"
#include "yangsaf/tracker.hpp"

using namespace yangsaf;
using test::kFs;

namespace {

// Map with one hot channel per frame.
std::vector<double> one_hot(std::size_t frames, std::size_t channels, const std::vector<int>& hot,
                            double p = 0.9) {
  std::vector<double> m(frames * channels, 0.0);
  for (std::size_t j = 0; j < frames; ++j)
    if (hot[j] >= 0) m[j * channels + static_cast<std::size_t>(hot[j])] = p;
  return m;
}

}  // namespace

TEST_CASE("hanning smoothing kernel") {
  const auto w = hanning_kernel(0.045, 200.0);
  REQUIRE(w.size() == 9);
  for (std::size_t i = 0; i < w.size(); ++i) {
    CHECK(w[i] > 0.0);
    CHECK(w[i] == doctest::Approx(w[w.size() - 1 - i]));
  }
  CHECK(*std::max_element(w.begin(), w.end()) == doctest::Approx(w[4]));
}

TEST_CASE("search range around a 120 Hz tone") {
  AnalysisConfig cfg;
  const AudioBuffer x(test::tone(120.0, 1.0), kFs);
  const auto m = analyze_frontend(x, cfg);
  const auto r = estimate_search_range(m, x, cfg);
  CHECK(std::abs(test::cents(r.center, 120.0)) <= 100.0);
  CHECK(r.lo == doctest::Approx(r.center * std::exp2(-1.3)));
  CHECK(r.hi == doctest::Approx(r.center * std::exp2(1.2)));
  CHECK(r.contains(120.0));
}

TEST_CASE("search range is energy weighted") {
  AnalysisConfig cfg;
  auto x = test::tone(300.0, 1.0, kFs, std::pow(10.0, -30.0 / 20.0));
  const auto loud = test::tone(120.0, 1.0);
  x.insert(x.end(), loud.begin(), loud.end());
  const AudioBuffer buf(x, kFs);
  const auto r = estimate_search_range(analyze_frontend(buf, cfg), buf, cfg);
  CHECK(std::abs(test::cents(r.center, 120.0)) <= 100.0);
}

TEST_CASE("search range on silence fails") {
  AnalysisConfig cfg;
  const AudioBuffer x(std::vector<double>(11025, 0.0), kFs);
  CHECK_THROWS_AS(estimate_search_range(analyze_frontend(x, cfg), x, cfg), AnalysisError);
}

TEST_CASE("probability smoothing: constant map and zero-amplitude frames") {
  AnalysisConfig cfg;
  FrameMaps maps;
  maps.layout = design_channels(cfg, kFs);
  maps.frame_rate = 200.0;
  const std::size_t frames = 60, ch = maps.layout.size();
  maps.frame_times.resize(frames);
  maps.prob_map.assign(frames * ch, 0.25);
  std::vector<double> amp(frames, 1.0);
  for (std::size_t j = 20; j < 25; ++j) amp[j] = 0.0;
  auto s = smooth_probability_map(maps, amp, cfg);
  for (std::size_t j = 5; j + 5 < frames; ++j)
    for (std::size_t c = 0; c < ch; ++c) CHECK(s[j * ch + c] == doctest::Approx(0.25).epsilon(1e-9));
  // Isolated silent frames take their neighbours' values.
  std::fill(amp.begin(), amp.end(), 0.0);
  amp[30] = 1.0;
  s = smooth_probability_map(maps, amp, cfg);
  CHECK(std::isfinite(s[32 * ch]));
  CHECK(s[32 * ch] == doctest::Approx(0.25));
}

TEST_CASE("probability smoothing raises the F0 channel at voicing onset") {
  AnalysisConfig cfg;
  std::vector<double> x(static_cast<std::size_t>(0.3 * kFs), 0.0);
  const auto v = test::harmonic_complex(120.0, 5, 0.7);
  x.insert(x.end(), v.begin(), v.end());
  const AudioBuffer buf(x, kFs);
  auto maps = analyze_frontend(buf, cfg);
  fill_probability_map(maps, cfg);
  const auto times = maps.frame_times;
  const auto amp = frame_amplitudes(buf, times, cfg.frame_rate, cfg.f_lo, cfg.f_hi);
  const auto s = smooth_probability_map(maps, amp, cfg);
  const std::size_t c = maps.layout.nearest(120.0);
  // First frame whose unsmoothed F0 channel shows evidence.
  std::size_t onset = 0;
  while (onset < maps.frames() && !(maps.prob_map[maps.index(onset, c)] > 0.05)) ++onset;
  REQUIRE(onset < maps.frames());
  CHECK(s[maps.index(onset, c)] > maps.prob_map[maps.index(onset, c)]);
}

TEST_CASE("greedy tracking: constant, gate, tie-break, carry") {
  AnalysisConfig cfg;
  const auto layout = design_channels(cfg, kFs);
  const std::size_t ch = layout.size();
  const auto range = SearchRange::around(120.0);
  const int f0c = static_cast<int>(layout.nearest(120.0));

  SUBCASE("constant") {
    const auto m = one_hot(20, ch, std::vector<int>(20, f0c));
    const auto p = track_best_channel(m, layout, 20, range, cfg);
    for (int c : p.channel) CHECK(c == f0c);
  }
  SUBCASE("octave distractor outside the gate") {
    auto m = one_hot(20, ch, std::vector<int>(20, f0c), 0.4);
    for (std::size_t j = 10; j < 20; ++j) m[j * ch + static_cast<std::size_t>(f0c + 12)] = 0.6;
    const auto p = track_best_channel(m, layout, 20, range, cfg);
    for (int c : p.channel) CHECK(c == f0c);
  }
  SUBCASE("ties go to the lower channel") {
    std::vector<double> m(ch, 0.0);
    m[static_cast<std::size_t>(f0c)] = 0.5;
    m[static_cast<std::size_t>(f0c + 3)] = 0.5;
    const auto p = track_best_channel(m, layout, 1, range, cfg);
    CHECK(p.channel[0] == f0c);
  }
  SUBCASE("empty frames carry the previous channel up to the limit") {
    std::vector<int> hot(20, -1);
    for (int j = 0; j < 5; ++j) hot[static_cast<std::size_t>(j)] = f0c;
    const auto p = track_best_channel(one_hot(20, ch, hot), layout, 20, range, cfg);
    for (int j = 5; j < 10; ++j) {
      CHECK(p.channel[static_cast<std::size_t>(j)] == f0c);
      CHECK(p.low_confidence[static_cast<std::size_t>(j)] == 1);
    }
    CHECK(p.channel[10] == -1);
  }
  SUBCASE("channel changes are bounded by the gate") {
    std::vector<int> hot(40);
    for (std::size_t j = 0; j < 40; ++j) hot[j] = f0c + static_cast<int>(j % 2 ? 11 : 0);
    const auto p = track_best_channel(one_hot(40, ch, hot), layout, 40, range, cfg);
    for (std::size_t j = 1; j < 40; ++j)
      CHECK(std::abs(p.channel[j] - p.channel[j - 1]) <= static_cast<int>(0.7 * 12));
  }
}

TEST_CASE("initial estimate on a 120 Hz tone") {
  AnalysisConfig cfg;
  const auto a = initial_analysis(AudioBuffer(test::tone(120.0, 1.0), kFs), cfg);
  std::size_t checked = 0;
  for (std::size_t j = 0; j < a.initial.size(); ++j) {
    const double t = a.initial.times[j];
    if (t < 0.1 || t > 0.9) continue;
    REQUIRE_FALSE(a.initial.is_masked(j));
    CHECK(std::abs(test::cents(a.initial.f0[j], 120.0)) <= 20.0);
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("initial estimate lies within the V[k] bounds of its channel") {
  AnalysisConfig cfg;
  TestSignalSpec s;
  s.depth_cents = 100;
  s.mod_freq = 5;
  s.snr_db = 10;
  s.duration = 1.0;
  const auto [x, truth] = synthesize(s);
  const auto a = initial_analysis(x, cfg);
  for (std::size_t j = 0; j < a.initial.size(); ++j) {
    if (a.initial.is_masked(j)) continue;
    const double fc = a.maps.layout.centers[static_cast<std::size_t>(a.path.channel[j])];
    CHECK(a.initial.f0[j] > 0.5 * fc);
    CHECK(a.initial.f0[j] < 1.25 * fc);
  }
}

TEST_CASE("tracking follows a fast sweep") {
  AnalysisConfig cfg;
  // 0.5 octave rise over 100 ms, held before and after.
  const std::size_t n = static_cast<std::size_t>(0.6 * kFs);
  std::vector<double> x(n), f(n);
  double phase = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / kFs;
    const double u = std::clamp((t - 0.25) / 0.1, 0.0, 1.0);
    f[i] = 120.0 * std::exp2(0.5 * u);
    for (int k = 1; k <= 4; ++k) x[i] += std::cos(kTwoPi * k * phase) / k;
    phase += f[i] / kFs;
  }
  const auto a = initial_analysis(AudioBuffer(x, kFs), cfg);
  for (std::size_t j = 0; j < a.path.channel.size(); ++j) {
    const double t = a.maps.frame_times[j];
    if (t < 0.05 || t > 0.55) continue;
    const auto truth = static_cast<int>(a.maps.layout.nearest(f[a.maps.frame_samples[j]]));
    CHECK(std::abs(a.path.channel[j] - truth) <= 1);
  }
}

TEST_CASE("tracking is symmetric under time reversal") {
  AnalysisConfig cfg;
  TestSignalSpec s;
  s.depth_cents = 200;
  s.mod_freq = 3;
  s.duration = 1.0;
  s.n_harmonics = 8;
  auto [x, truth] = synthesize(s);
  std::vector<double> r(x.samples().rbegin(), x.samples().rend());
  const auto a = initial_analysis(x, cfg);
  const auto b = initial_analysis(AudioBuffer(r, kFs), cfg);
  const std::size_t n = a.path.channel.size();
  REQUIRE(b.path.channel.size() == n);
  for (std::size_t j = 20; j + 20 < n; ++j) CHECK(std::abs(a.path.channel[j] - b.path.channel[n - 1 - j]) <= 1);
}
