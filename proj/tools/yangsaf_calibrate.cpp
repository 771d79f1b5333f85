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

// Monte Carlo calibration of the aperiodicity measure: a sinusoid at the
// detector center plus white Gaussian noise, swept over in-band SNR.
// Prints the constants for include/yangsaf/calibration.hpp.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "yangsaf/evaluation.hpp"
#include "yangsaf/frontend.hpp"
#include "yangsaf/testgen.hpp"

using namespace yangsaf;

namespace {

constexpr double kFs = 22050.0;
constexpr double kDuration = 1.0;
const double kCenters[] = {100.0, 160.0, 250.0};
constexpr int kSeeds = 4;

struct Point {
  double snr_db;
  double aperiodicity;  // median a_ks
  double log_if_var;    // var of ln(f_est / f_c)
};

Point measure(double snr_db) {
  std::vector<double> a_all, ratio_var;
  double var_acc = 0.0;
  std::size_t var_n = 0;
  for (double fc : kCenters) {
    for (int seed = 1; seed <= kSeeds; ++seed) {
      const auto n = static_cast<std::size_t>(kDuration * kFs);
      // Tone power 1/2; noise power set so the power inside a band one
      // width_frequency (= fc) wide is snr_db below it.
      const double band_noise = 0.5 * std::pow(10.0, -snr_db / 10.0);
      const double total_noise = band_noise * (0.5 * kFs) / fc;
      const auto noise = unit_noise(n, static_cast<std::uint64_t>(seed * 1000 + fc));
      std::vector<double> x(n);
      for (std::size_t i = 0; i < n; ++i)
        x[i] = std::cos(kTwoPi * fc * static_cast<double>(i) / kFs) + std::sqrt(total_noise) * noise[i];
      const auto track = channel_aperiodicity(AudioBuffer(std::move(x), kFs), fc);
      const std::size_t edge = static_cast<std::size_t>(0.1 * kFs);
      for (std::size_t i = edge; i + edge < n; ++i) {
        if (!track.valid[i]) continue;
        a_all.push_back(track.aperiodicity_smoothed[i]);
        if (std::isfinite(track.inst_freq[i]) && track.inst_freq[i] > 0.0) {
          const double e = std::log(track.inst_freq[i] / fc);
          var_acc += e * e;
          ++var_n;
        }
      }
    }
  }
  return {snr_db, median(a_all), var_n ? var_acc / static_cast<double>(var_n) : NAN};
}

}  // namespace

int main() {
  std::vector<Point> points;
  for (double snr = -10.0; snr <= 60.0 + 1e-9; snr += 5.0) points.push_back(measure(snr));

  std::printf("# snr_db  median_a_ks  var_ln_if  ratio\n");
  std::vector<double> log_ratio;
  for (const auto& p : points) {
    const double r = p.log_if_var / p.aperiodicity;
    std::printf("%6.1f  %.6e  %.6e  %.4f\n", p.snr_db, p.aperiodicity, p.log_if_var, r);
    if (p.snr_db >= 0.0 && p.snr_db <= 40.0) log_ratio.push_back(std::log(r));
  }
  double mean = 0.0;
  for (double l : log_ratio) mean += l;
  mean /= static_cast<double>(log_ratio.size());

  std::printf("\ninline constexpr double kSigmaScale = %.6g;\n\n", std::exp(mean));
  std::printf("inline constexpr std::array<std::pair<double, double>, %zu> kAperiodicityVsSnr = {{\n",
              points.size());
  for (const auto& p : points) std::printf("    {%.1f, %.6g},\n", p.snr_db, p.aperiodicity);
  std::printf("}};\n");
}
