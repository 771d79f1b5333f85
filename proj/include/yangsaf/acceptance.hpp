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

#include <string>
#include <vector>

#include "yangsaf/evaluation.hpp"

namespace yangsaf {

struct CheckResult {
  int criterion = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // measured values against the threshold
};

/// SNR list of the noise battery.
std::vector<double> acceptance_snr_list();

/// FM battery: the octave points 1..32 Hz, continued in quarter octaves
/// to 64 Hz so the warped chain's -3 dB point is bracketed.
FmtfBattery acceptance_fmtf_battery();

/// Criterion 1: H-chain error <= 1/4 of the initial error at every SNR >= 0
/// dB, both curves non-increasing in SNR.
CheckResult check_noise_robustness(const std::vector<SnrSweepRow>& rows);

/// Criteria 2-4 from one FM battery: gain / -3 dB ratio, RMS ratio over
/// 2..16 Hz, spurious residual at 16 Hz.
std::vector<CheckResult> check_fm_battery(const std::vector<FmtfRow>& rows, const FmtfBattery& battery);

std::string format_check(const CheckResult& r);

}  // namespace yangsaf
