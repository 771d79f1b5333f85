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

#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "yangsaf/frontend.hpp"
#include "yangsaf/probability.hpp"

using namespace yangsaf;

namespace {

double integrate(const MixtureFrame& m, double lo, double hi, int n = 200000) {
  const double h = (hi - lo) / n;
  double acc = 0.5 * (m.density(lo) + m.density(hi));
  for (int i = 1; i < n; ++i) acc += m.density(lo + i * h);
  return acc * h;
}

}  // namespace

TEST_CASE("variance from aperiodicity: floor and linearity") {
  const double smin = std::log(2.0) / 48.0;
  CHECK(variance_from_aperiodicity(0.0, 2.0, smin) == doctest::Approx(smin * smin));
  const double a = 0.01;
  CHECK(variance_from_aperiodicity(2 * a, 2.0, smin) == doctest::Approx(2 * variance_from_aperiodicity(a, 2.0, smin)));
}

TEST_CASE("mixture density integrates to one") {
  const std::vector<double> f = {100.0, 119.8, 120.1, 240.0};
  const std::vector<double> v = {0.01, 0.002, 0.0005, 0.03};
  const auto m = build_mixture(f, v);
  REQUIRE(m.components.size() == 4);
  CHECK(integrate(m, std::log(10.0), std::log(5000.0)) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("single and identical components") {
  const std::vector<double> one_f = {150.0}, one_v = {0.001};
  const auto one = build_mixture(one_f, one_v);
  CHECK(one.components.size() == 1);
  CHECK(one.components[0].weight == doctest::Approx(1.0));
  const std::vector<double> three_f = {150.0, 150.0, 150.0}, three_v = {0.001, 0.001, 0.001};
  const auto three = build_mixture(three_f, three_v);
  for (double nu : {4.9, 5.0, 5.01, 5.1}) CHECK(three.density(nu) == doctest::Approx(one.density(nu)));
  // Masked (NaN) channels contribute nothing.
  const std::vector<double> masked_f = {NAN, 150.0}, masked_v = {0.001, 0.001};
  CHECK(build_mixture(masked_f, masked_v).components.size() == 1);
  const std::vector<double> none_f = {NAN}, none_v = {1.0};
  CHECK(build_mixture(none_f, none_v).empty());
}

TEST_CASE("bimodal mixture puts two thirds of its mass near 120 Hz") {
  const std::vector<double> f = {119.8, 120.1, 240.0};
  const std::vector<double> v = {1e-4, 1e-4, 1e-4};
  const auto m = build_mixture(f, v);
  CHECK(integrate(m, std::log(110.0), std::log(130.0)) == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("channel probabilities: delta limit, edge split, additivity") {
  const auto l = design_channels(40.0, 1000.0, 12, test::kFs);
  const std::size_t k = 20;
  {
    const std::vector<double> f = {l.centers[k]}, v = {1e-12};
    const auto m = build_mixture(f, v);
    CHECK(channel_probability(m, k, l) == doctest::Approx(1.0).epsilon(1e-9));
  }
  {
    const std::vector<double> f = {l.band_high(k)}, v = {1e-4};
    const auto m = build_mixture(f, v);
    CHECK(std::abs(channel_probability(m, k, l) - 0.5) <= 1e-6);
    CHECK(std::abs(channel_probability(m, k + 1, l) - 0.5) <= 1e-6);
  }
  {
    const std::vector<double> f = {80.0, 130.0, 260.0}, v = {0.01, 0.02, 0.005};
    const auto m = build_mixture(f, v);
    double sum = 0.0;
    for (std::size_t c = 0; c < l.size(); ++c) sum += channel_probability(m, c, l);
    const double covered = integrate(m, std::log(l.band_low(0)), std::log(l.band_high(l.size() - 1)), 400000);
    CHECK(sum <= 1.0 + 1e-6);
    CHECK(sum == doctest::Approx(covered).epsilon(1e-6));
  }
}
