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

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "yangsaf/audio.hpp"
#include "yangsaf/fft.hpp"

namespace yangsaf {

// Four-term cosine-series window with continuous first derivative
// (Nuttall 1981, Table II, item 11).
inline constexpr std::array<double, 4> kNuttallCoefficients = {0.338946, 0.481973, 0.161054,
                                                               0.018027};

/// Continuous Nuttall window w(t) with support |t| <= 2/width_frequency
/// (period T = 4/width_frequency). Zero outside the support.
double nuttall_value(double t, double width_frequency);

/// Analytic dw/dt of nuttall_value.
double nuttall_slope(double t, double width_frequency);

/// Number of samples on each side of the center: round(2 * fs / width_frequency).
std::size_t kernel_half_length(double width_frequency, double sample_rate);

/// Nuttall window sampled at n/fs, n = -M..M (closed support, odd length).
std::vector<double> nuttall_window(double f_c, double sample_rate);

/// w_d(t) = dw/dt + j*2*pi*f_c*w(t) on the same grid as nuttall_window.
std::vector<Complex> derivative_window(double f_c, double sample_rate);

/// Analytic bandpass impulse response h = w exp(j2pi f t) and the matching
/// derivative kernel h_d. Both are centered: index half_length() is t = 0.
struct ComplexKernelPair {
  std::vector<Complex> h;
  std::vector<Complex> h_d;
  double center_frequency = 0.0;
  double width_frequency = 0.0;  // window period is 4 / width_frequency
  double support_half_width = 0.0;
  double sample_rate = 0.0;

  std::size_t half_length() const { return h.size() / 2; }
};

/// Front-end kernel: center and window width both tied to f_c, so the
/// first spectral zeros sit at 0 and 2*f_c.
ComplexKernelPair make_kernel_pair(double f_c, double sample_rate);

/// Kernel with a window of period 4/width_frequency shifted to center.
/// Used by the harmonic detectors, whose width is fixed by F0.
ComplexKernelPair make_kernel_pair(double center, double width_frequency, double sample_rate);

/// DTFT of a centered kernel at frequency f (Hz).
Complex frequency_response(std::span<const Complex> kernel, double f, double sample_rate);

// "Same"-mode convolution: out[n] = sum_m k[c + m] x[n - m] with
// c = (k.size() - 1) / 2 and x zero outside [0, x.size()).
std::vector<Complex> convolve_direct(std::span<const Complex> x, std::span<const Complex> k);
std::vector<Complex> convolve_fft(std::span<const Complex> x, std::span<const Complex> k);
std::vector<Complex> convolve_complex(std::span<const Complex> x, std::span<const Complex> k);
std::vector<Complex> convolve_complex(std::span<const double> x, std::span<const Complex> k);

/// Spectrum of a centered kernel on an fft_size circular grid (center at
/// index 0, negative taps wrapped to the end).
std::vector<Complex> kernel_spectrum(std::span<const Complex> kernel, std::size_t fft_size);

/// Zero-padded forward DFT of a signal.
std::vector<Complex> signal_spectrum(std::span<const Complex> x, std::size_t fft_size);
std::vector<Complex> signal_spectrum(std::span<const double> x, std::size_t fft_size);

/// Multiplies two spectra, inverts, and keeps the first n samples. Equals
/// same-mode convolution when fft_size >= n + kernel half length.
std::vector<Complex> filter_spectrum(std::span<const Complex> x_spectrum,
                                     std::span<const Complex> k_spectrum, std::size_t n);

/// FFT size adequate for same-mode filtering of n samples by a kernel of
/// the given half length.
std::size_t filter_fft_size(std::size_t n, std::size_t kernel_half_length);

}  // namespace yangsaf
