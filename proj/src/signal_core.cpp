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

#include "yangsaf/signal_core.hpp"

#include <cmath>

namespace yangsaf {
namespace {

void check_frequency(double f, double sample_rate, const char* what) {
  if (!(sample_rate > 0.0)) throw ParameterError(std::string(what) + ": sample_rate must be positive");
  if (!(f > 0.0) || !(f < 0.5 * sample_rate))
    throw ParameterError(std::string(what) + ": frequency must lie in (0, sample_rate/2)");
}

}  // namespace

double nuttall_value(double t, double width_frequency) {
  const double half = 2.0 / width_frequency;
  if (std::abs(t) > half) return 0.0;
  const double phase = kTwoPi * t / (2.0 * half);
  double w = 0.0;
  for (std::size_t k = 0; k < kNuttallCoefficients.size(); ++k)
    w += kNuttallCoefficients[k] * std::cos(static_cast<double>(k) * phase);
  return w;
}

double nuttall_slope(double t, double width_frequency) {
  const double half = 2.0 / width_frequency;
  if (std::abs(t) > half) return 0.0;
  const double omega = kTwoPi / (2.0 * half);
  double d = 0.0;
  for (std::size_t k = 1; k < kNuttallCoefficients.size(); ++k) {
    const double kk = static_cast<double>(k);
    d -= kNuttallCoefficients[k] * kk * omega * std::sin(kk * omega * t);
  }
  return d;
}

std::size_t kernel_half_length(double width_frequency, double sample_rate) {
  return static_cast<std::size_t>(std::lround(2.0 * sample_rate / width_frequency));
}

std::vector<double> nuttall_window(double f_c, double sample_rate) {
  check_frequency(f_c, sample_rate, "nuttall_window");
  const auto m = static_cast<long>(kernel_half_length(f_c, sample_rate));
  std::vector<double> w(static_cast<std::size_t>(2 * m + 1));
  for (long n = 0; n <= m; ++n) {
    const double v = nuttall_value(static_cast<double>(n) / sample_rate, f_c);
    w[static_cast<std::size_t>(m + n)] = v;
    w[static_cast<std::size_t>(m - n)] = v;
  }
  return w;
}

std::vector<Complex> derivative_window(double f_c, double sample_rate) {
  check_frequency(f_c, sample_rate, "derivative_window");
  const auto m = static_cast<long>(kernel_half_length(f_c, sample_rate));
  const double omega_c = kTwoPi * f_c;
  std::vector<Complex> wd(static_cast<std::size_t>(2 * m + 1));
  for (long n = -m; n <= m; ++n) {
    const double t = static_cast<double>(n) / sample_rate;
    wd[static_cast<std::size_t>(n + m)] = {nuttall_slope(t, f_c), omega_c * nuttall_value(t, f_c)};
  }
  return wd;
}

ComplexKernelPair make_kernel_pair(double f_c, double sample_rate) {
  return make_kernel_pair(f_c, f_c, sample_rate);
}

ComplexKernelPair make_kernel_pair(double center, double width_frequency, double sample_rate) {
  check_frequency(center, sample_rate, "make_kernel_pair");
  if (!(width_frequency > 0.0)) throw ParameterError("make_kernel_pair: width must be positive");
  const auto m = static_cast<long>(kernel_half_length(width_frequency, sample_rate));
  const double omega_c = kTwoPi * center;
  ComplexKernelPair kp;
  kp.center_frequency = center;
  kp.width_frequency = width_frequency;
  kp.support_half_width = 2.0 / width_frequency;
  kp.sample_rate = sample_rate;
  kp.h.resize(static_cast<std::size_t>(2 * m + 1));
  kp.h_d.resize(kp.h.size());
  for (long n = -m; n <= m; ++n) {
    const double t = static_cast<double>(n) / sample_rate;
    const double w = nuttall_value(t, width_frequency);
    const Complex wd{nuttall_slope(t, width_frequency), omega_c * w};
    const Complex carrier = std::polar(1.0, omega_c * t);
    kp.h[static_cast<std::size_t>(n + m)] = w * carrier;
    kp.h_d[static_cast<std::size_t>(n + m)] = wd * carrier;
  }
  return kp;
}

Complex frequency_response(std::span<const Complex> kernel, double f, double sample_rate) {
  const long c = static_cast<long>(kernel.size() - 1) / 2;
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < kernel.size(); ++i) {
    const double t = static_cast<double>(static_cast<long>(i) - c) / sample_rate;
    acc += kernel[i] * std::polar(1.0, -kTwoPi * f * t);
  }
  return acc;
}

std::vector<Complex> convolve_direct(std::span<const Complex> x, std::span<const Complex> k) {
  if (x.empty() || k.empty()) throw ParameterError("convolve: empty input");
  const long n = static_cast<long>(x.size());
  const long c = static_cast<long>(k.size() - 1) / 2;
  const long len = static_cast<long>(k.size());
  std::vector<Complex> out(x.size());
  for (long i = 0; i < n; ++i) {
    Complex acc{0.0, 0.0};
    // k index j corresponds to lag m = j - c, sample x[i - m].
    const long j_lo = std::max(0L, i - n + 1 + c);
    const long j_hi = std::min(len - 1, i + c);
    for (long j = j_lo; j <= j_hi; ++j) acc += k[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(i - j + c)];
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

std::size_t filter_fft_size(std::size_t n, std::size_t kernel_half_length) {
  return fft_good_size(n + kernel_half_length + 1);
}

std::vector<Complex> kernel_spectrum(std::span<const Complex> kernel, std::size_t fft_size) {
  const std::size_t c = (kernel.size() - 1) / 2;
  if (kernel.size() > fft_size) throw ParameterError("kernel_spectrum: kernel longer than FFT");
  std::vector<Complex> buf(fft_size, Complex{0.0, 0.0});
  for (std::size_t i = 0; i < kernel.size(); ++i) {
    const long lag = static_cast<long>(i) - static_cast<long>(c);
    const std::size_t pos = lag >= 0 ? static_cast<std::size_t>(lag)
                                     : fft_size - static_cast<std::size_t>(-lag);
    buf[pos] = kernel[i];
  }
  fft_forward(buf);
  return buf;
}

std::vector<Complex> signal_spectrum(std::span<const Complex> x, std::size_t fft_size) {
  std::vector<Complex> buf(fft_size, Complex{0.0, 0.0});
  std::copy(x.begin(), x.end(), buf.begin());
  fft_forward(buf);
  return buf;
}

std::vector<Complex> signal_spectrum(std::span<const double> x, std::size_t fft_size) {
  std::vector<Complex> buf(fft_size, Complex{0.0, 0.0});
  for (std::size_t i = 0; i < x.size(); ++i) buf[i] = x[i];
  fft_forward(buf);
  return buf;
}

std::vector<Complex> filter_spectrum(std::span<const Complex> x_spectrum,
                                     std::span<const Complex> k_spectrum, std::size_t n) {
  std::vector<Complex> buf(x_spectrum.size());
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = x_spectrum[i] * k_spectrum[i];
  fft_inverse(buf);
  buf.resize(n);
  return buf;
}

std::vector<Complex> convolve_fft(std::span<const Complex> x, std::span<const Complex> k) {
  if (x.empty() || k.empty()) throw ParameterError("convolve: empty input");
  const std::size_t size = filter_fft_size(x.size(), k.size());
  return filter_spectrum(signal_spectrum(x, size), kernel_spectrum(k, size), x.size());
}

std::vector<Complex> convolve_complex(std::span<const Complex> x, std::span<const Complex> k) {
  if (x.empty() || k.empty()) throw ParameterError("convolve: empty input");
  // Direct path for short problems; FFT agrees to rounding otherwise.
  if (k.size() <= 64 || x.size() * k.size() <= 1u << 16) return convolve_direct(x, k);
  return convolve_fft(x, k);
}

std::vector<Complex> convolve_complex(std::span<const double> x, std::span<const Complex> k) {
  std::vector<Complex> xc(x.begin(), x.end());
  return convolve_complex(std::span<const Complex>(xc), k);
}

}  // namespace yangsaf
