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

#include <complex>
#include <cstddef>
#include <span>

namespace yangsaf {

using Complex = std::complex<double>;

// Thin wrapper over FFTW. Plans are created once per (size, direction)
// and shared; execution is thread-safe.

/// Smallest 2^a 3^b 5^c 7^d >= n.
std::size_t fft_good_size(std::size_t n);

/// In-place unnormalized forward DFT (exp(-j...)).
void fft_forward(std::span<Complex> data);

/// In-place inverse DFT including the 1/N normalization.
void fft_inverse(std::span<Complex> data);

}  // namespace yangsaf
