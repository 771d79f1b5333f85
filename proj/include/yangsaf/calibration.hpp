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
#include <utility>

namespace yangsaf {

// Constants produced by tools/yangsaf_calibrate (sinusoid at the detector
// center plus white Gaussian noise, fs = 22050 Hz). Rerun the tool after
// changing the window or the residual cascade.

/// sigma^2 (natural-log Hz, squared) per unit of smoothed aperiodicity;
/// geometric mean of the ratio over 0..40 dB.
inline constexpr double kSigmaScale = 0.946433;

/// Median smoothed aperiodicity versus in-band SNR. The band is one
/// width_frequency wide around the detector center. Rows ascend in SNR.
inline constexpr std::array<std::pair<double, double>, 15> kAperiodicityVsSnr = {{
    {-10.0, 0.0421204},
    {-5.0, 0.0312538},
    {0.0, 0.01502},
    {5.0, 0.00466248},
    {10.0, 0.00145619},
    {15.0, 0.000456607},
    {20.0, 0.000143911},
    {25.0, 4.56306e-05},
    {30.0, 1.44517e-05},
    {35.0, 4.56864e-06},
    {40.0, 1.44407e-06},
    {45.0, 4.56596e-07},
    {50.0, 1.44328e-07},
    {55.0, 4.56363e-08},
    {60.0, 1.44288e-08},
}};

}  // namespace yangsaf
