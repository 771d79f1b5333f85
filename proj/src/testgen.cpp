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

#include "yangsaf/testgen.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace yangsaf {
namespace {

constexpr double kNyquistFill = 0.9;

// Bessel-series coefficients for exp(b sin th):
//   I0(b) + 2 sum_k I_k(b) * {(-1)^((k-1)/2) sin k th (k odd), (-1)^(k/2) cos k th (k even)}.
std::vector<double> bessel_terms(double b) {
  std::vector<double> terms;
  if (b == 0.0) return {1.0};
  for (int k = 0; k < 200; ++k) {
    const double ik = std::cyl_bessel_i(static_cast<double>(k), b);
    terms.push_back(ik);
    if (k > 1 && ik < 1e-19 * terms[0]) break;
  }
  return terms;
}

double log_depth(const TestSignalSpec& spec) { return spec.depth_cents / 2400.0 * std::log(2.0); }

}  // namespace

double TestSignalSpec::f0_max() const { return f0_mean * std::exp2(depth_cents / 2400.0); }

int TestSignalSpec::harmonic_count() const {
  if (n_harmonics > 0) return n_harmonics;
  return std::max(1, static_cast<int>(std::floor(kNyquistFill * 0.5 * sample_rate / f0_max())));
}

void TestSignalSpec::validate() const {
  if (!(f0_mean > 0.0) || !std::isfinite(f0_mean)) throw ParameterError("testgen: f0_mean must be positive");
  if (!(depth_cents >= 0.0) || !std::isfinite(depth_cents)) throw ParameterError("testgen: depth must be >= 0");
  if (!(mod_freq >= 0.0) || !std::isfinite(mod_freq)) throw ParameterError("testgen: mod_freq must be >= 0");
  if (n_harmonics < 0) throw ParameterError("testgen: n_harmonics must be >= 0");
  if (!(duration > 0.0) || !std::isfinite(duration)) throw ParameterError("testgen: duration must be positive");
  if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) throw ParameterError("testgen: sample_rate must be positive");
  if (!std::isfinite(harmonic_slope_db)) throw ParameterError("testgen: harmonic slope must be finite");
  if (!(harmonic_count() * f0_max() < 0.5 * sample_rate))
    throw ParameterError("testgen: highest harmonic at peak F0 reaches Nyquist");
  if (snr_db && !std::isfinite(*snr_db)) throw ParameterError("testgen: snr must be finite");
}

double test_f0(const TestSignalSpec& spec, double t) {
  return spec.f0_mean * std::exp(log_depth(spec) * std::sin(kTwoPi * spec.mod_freq * t));
}

double test_phase_cycles(const TestSignalSpec& spec, double t) {
  const double b = log_depth(spec);
  if (b == 0.0 || spec.mod_freq == 0.0) return spec.f0_mean * t;
  const auto terms = bessel_terms(b);
  const double w = kTwoPi * spec.mod_freq;
  double acc = terms[0] * t;
  for (std::size_t k = 1; k < terms.size(); ++k) {
    const double kw = static_cast<double>(k) * w;
    const double c = 2.0 * terms[k] / kw;
    if (k % 2 == 1) {
      const double sign = ((k - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
      acc += sign * c * (1.0 - std::cos(kw * t));
    } else {
      const double sign = (k / 2) % 2 == 0 ? 1.0 : -1.0;
      acc += sign * c * std::sin(kw * t);
    }
  }
  return spec.f0_mean * acc;
}

std::pair<AudioBuffer, F0Trajectory> synthesize(const TestSignalSpec& spec) {
  spec.validate();
  const auto n = static_cast<std::size_t>(std::llround(spec.duration * spec.sample_rate));
  if (n == 0) throw ParameterError("testgen: duration shorter than one sample");
  const int harmonics = spec.harmonic_count();
  std::vector<double> amp(static_cast<std::size_t>(harmonics));
  double amp_sum = 0.0;
  for (int k = 1; k <= harmonics; ++k) {
    amp[static_cast<std::size_t>(k - 1)] = std::pow(10.0, spec.harmonic_slope_db * std::log2(k) / 20.0);
    amp_sum += amp[static_cast<std::size_t>(k - 1)];
  }
  const double scale = 0.5 / amp_sum;

  std::vector<double> x(n, 0.0);
  F0Trajectory truth;
  truth.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / spec.sample_rate;
    const double phi = test_phase_cycles(spec, t);
    double s = 0.0;
    for (int k = 1; k <= harmonics; ++k) {
      const double kp = static_cast<double>(k) * phi;
      s += amp[static_cast<std::size_t>(k - 1)] * std::cos(kTwoPi * (kp - std::floor(kp)));
    }
    x[i] = scale * s;
    truth.times[i] = t;
    truth.set(i, test_f0(spec, t), 0.0);
  }
  AudioBuffer clean(std::move(x), spec.sample_rate);
  if (spec.snr_db) return {add_noise(clean, *spec.snr_db, spec.seed), std::move(truth)};
  return {std::move(clean), std::move(truth)};
}

std::vector<double> unit_noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> noise(n);
  double power = 0.0;
  for (double& v : noise) {
    v = normal(rng);
    power += v * v;
  }
  power /= static_cast<double>(n);
  const double g = 1.0 / std::sqrt(power);
  for (double& v : noise) v *= g;
  return noise;
}

AudioBuffer add_noise(const AudioBuffer& x, double snr_db, std::uint64_t seed) {
  if (!std::isfinite(snr_db)) throw ParameterError("add_noise: snr must be finite");
  double power = 0.0;
  for (double s : x.samples()) power += s * s;
  power /= static_cast<double>(x.size());
  if (!(power > 0.0)) throw ParameterError("add_noise: silent signal has no defined SNR");
  const double g = std::sqrt(power * std::pow(10.0, -snr_db / 10.0));
  const auto noise = unit_noise(x.size(), seed);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] + g * noise[i];
  return AudioBuffer(std::move(out), x.sample_rate());
}

}  // namespace yangsaf
