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

#include "yangsaf/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace yangsaf {
namespace {

constexpr double kRefinedVsInitial = 0.25;
constexpr double kMinGainAt16 = 0.7;
constexpr double kMinus3dbRatio = 1.8;
constexpr double kWarpedVsHarmonicRms = 0.2;
constexpr double kPaperRmsFactor = 10.0;
constexpr double kMaxSpuriousDb = -40.0;
constexpr double kSpuriousModHz = 16.0;

std::string num(double v) { return format_number(v); }

bool non_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] <= v[i - 1])) return false;
  return true;
}

const FmtfRow* row_at(const std::vector<FmtfRow>& rows, double mod) {
  for (const auto& r : rows)
    if (std::abs(r.mod_hz - mod) < 1e-9) return &r;
  return nullptr;
}

}  // namespace

std::vector<double> acceptance_snr_list() { return {-10.0, 0.0, 10.0, 20.0, 30.0, 100.0}; }

FmtfBattery acceptance_fmtf_battery() {
  FmtfBattery b;
  b.mod_freqs = {1, 2, 4, 8, 16, 32};
  for (double e : {5.25, 5.5, 5.75, 6.0}) b.mod_freqs.push_back(std::exp2(e));
  return b;
}

CheckResult check_noise_robustness(const std::vector<SnrSweepRow>& rows) {
  CheckResult r{1, "noise robustness", true, ""};
  std::ostringstream d;
  std::vector<double> initial, refined;
  for (const auto& row : rows) {
    initial.push_back(row.rms_initial);
    refined.push_back(row.rms_harmonic);
    const double ratio = row.rms_harmonic / row.rms_initial;
    d << "snr " << num(row.snr_db) << ": initial " << num(row.rms_initial) << " H " << num(row.rms_harmonic)
      << " ratio " << num(ratio) << "; ";
    if (row.snr_db >= 0.0 && !(ratio <= kRefinedVsInitial)) r.pass = false;
  }
  const bool mono = non_increasing(initial) && non_increasing(refined);
  d << "monotone " << (mono ? "yes" : "no") << " (need ratio <= " << num(kRefinedVsInitial) << " at SNR >= 0)";
  r.pass = r.pass && mono && !rows.empty();
  r.detail = d.str();
  return r;
}

std::vector<CheckResult> check_fm_battery(const std::vector<FmtfRow>& rows, const FmtfBattery& battery) {
  std::vector<CheckResult> out;

  {
    CheckResult r{2, "FMTF", false, ""};
    const FmtfRow* at16 = row_at(rows, 16.0);
    const auto h = fmtf_curve(rows, Variant::kHarmonic).minus3db;
    const auto t = fmtf_curve(rows, Variant::kWarped).minus3db;
    const double ratio = t.frequency / h.frequency;
    std::ostringstream d;
    d << "gain_T(16 Hz) " << (at16 ? num(at16->gain_warped) : "missing") << " (>= " << num(kMinGainAt16)
      << "); -3 dB H " << (h.is_lower_bound ? ">= " : "") << num(h.frequency) << " Hz, T "
      << (t.is_lower_bound ? ">= " : "") << num(t.frequency) << " Hz, ratio " << num(ratio) << " (>= "
      << num(kMinus3dbRatio) << ")";
    // A censored H point makes the ratio meaningless.
    r.pass = at16 && at16->gain_warped >= kMinGainAt16 && !h.is_lower_bound && ratio >= kMinus3dbRatio;
    r.detail = d.str();
    out.push_back(r);
  }
  {
    CheckResult r{3, "RMS tracking", true, ""};
    std::ostringstream d;
    double worst = 0.0;
    int points = 0;
    for (const auto& row : rows) {
      if (row.mod_hz < 2.0 || row.mod_hz > 16.0) continue;
      ++points;
      const double ratio = row.rms_warped / row.rms_harmonic;
      worst = std::max(worst, ratio);
      d << num(row.mod_hz) << " Hz: H " << num(row.rms_harmonic) << " T " << num(row.rms_warped) << "; ";
      if (!(ratio <= kWarpedVsHarmonicRms)) r.pass = false;
    }
    r.pass = r.pass && points > 0;
    d << "worst T/H " << num(worst) << " (<= " << num(kWarpedVsHarmonicRms) << "), improvement "
      << num(1.0 / worst) << "x vs paper " << num(kPaperRmsFactor) << "x";
    r.detail = d.str();
    out.push_back(r);
  }
  {
    CheckResult r{4, "spurious suppression", false, ""};
    const FmtfRow* at = row_at(rows, kSpuriousModHz);
    std::ostringstream d;
    if (at) {
      d << "T residual " << num(at->spurious_warped_db) << " dB, H " << num(at->spurious_harmonic_db)
        << " dB re modulation (T <= " << num(kMaxSpuriousDb) << " dB), depth " << num(battery.depth_cents)
        << " cents";
      r.pass = at->spurious_warped_db <= kMaxSpuriousDb;
    } else {
      d << "16 Hz point missing";
    }
    r.detail = d.str();
    out.push_back(r);
  }
  return out;
}

std::string format_check(const CheckResult& r) {
  return std::string(r.pass ? "PASS" : "FAIL") + " criterion " + std::to_string(r.criterion) + " (" + r.name +
         "): " + r.detail;
}

}  // namespace yangsaf
