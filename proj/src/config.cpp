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

#include "yangsaf/config.hpp"

#include <cstdio>

#include "json.hpp"
#include "yangsaf/audio.hpp"

namespace yangsaf {

using nlohmann::json;

std::string to_string(Variant v) { return v == Variant::kHarmonic ? "H" : "T"; }

Variant variant_from_string(const std::string& s) {
  if (s == "H" || s == "h" || s == "harmonic") return Variant::kHarmonic;
  if (s == "T" || s == "t" || s == "warped") return Variant::kWarped;
  throw ParameterError("unknown variant '" + s + "' (expected H or T)");
}

void AnalysisConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError(std::string("config: ") + name + " must be positive");
  };
  positive(f_lo, "f_lo");
  positive(f_hi, "f_hi");
  if (!(f_hi > f_lo)) throw ParameterError("config: f_hi must exceed f_lo");
  if (channels_per_octave < 1) throw ParameterError("config: channels_per_octave must be >= 1");
  positive(frame_rate, "frame_rate");
  positive(sigma_scale, "sigma_scale");
  positive(sigma_min, "sigma_min");
  positive(range_octaves_below, "range_octaves_below");
  positive(range_octaves_above, "range_octaves_above");
  if (histogram_bins < 2) throw ParameterError("config: histogram_bins must be >= 2");
  positive(smoothing_window_s, "smoothing_window_s");
  positive(gate_octaves, "gate_octaves");
  positive(local_max_radius_octaves, "local_max_radius_octaves");
  if (carry_limit_frames < 0) throw ParameterError("config: carry_limit_frames must be >= 0");
  positive(bank_step_semitones, "bank_step_semitones");
  if (warp_upsample < 1) throw ParameterError("config: warp_upsample must be >= 1");
  positive(sanity_gate_octaves, "sanity_gate_octaves");
  positive(battery_duration_s, "battery_duration_s");
  positive(battery_sample_rate, "battery_sample_rate");
  if (!(edge_exclusion_s >= 0.0)) throw ParameterError("config: edge_exclusion_s must be >= 0");
  if (seeds.empty()) throw ParameterError("config: at least one seed required");
}

namespace {

json to_json(const AnalysisConfig& c) {
  json j;
  j["f_lo"] = c.f_lo;
  j["f_hi"] = c.f_hi;
  j["channels_per_octave"] = c.channels_per_octave;
  j["frame_rate"] = c.frame_rate;
  j["sigma_scale"] = c.sigma_scale;
  j["sigma_min"] = c.sigma_min;
  j["range_octaves_below"] = c.range_octaves_below;
  j["range_octaves_above"] = c.range_octaves_above;
  j["histogram_bins"] = c.histogram_bins;
  j["smoothing_window_s"] = c.smoothing_window_s;
  j["gate_octaves"] = c.gate_octaves;
  j["local_max_radius_octaves"] = c.local_max_radius_octaves;
  j["carry_limit_frames"] = c.carry_limit_frames;
  j["variant"] = to_string(c.variant);
  j["refinement_enabled"] = c.refinement_enabled;
  j["harmonic_variance_over_k2"] = c.harmonic_variance_over_k2;
  j["bank_step_semitones"] = c.bank_step_semitones;
  j["warp_upsample"] = c.warp_upsample;
  j["sanity_gate_octaves"] = c.sanity_gate_octaves;
  j["battery_duration_s"] = c.battery_duration_s;
  j["battery_sample_rate"] = c.battery_sample_rate;
  j["edge_exclusion_s"] = c.edge_exclusion_s;
  j["seeds"] = c.seeds;
  return j;
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParameterError(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

std::string config_to_json(const AnalysisConfig& config) { return to_json(config).dump(2) + "\n"; }

// Missing keys keep their defaults; unknown keys are an error so typos surface.
AnalysisConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParameterError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ParameterError("config: top level must be an object");
  AnalysisConfig c;
  const json known = to_json(c);
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw ParameterError("config: unknown key '" + key + "'");
  read(j, "f_lo", c.f_lo);
  read(j, "f_hi", c.f_hi);
  read(j, "channels_per_octave", c.channels_per_octave);
  read(j, "frame_rate", c.frame_rate);
  read(j, "sigma_scale", c.sigma_scale);
  read(j, "sigma_min", c.sigma_min);
  read(j, "range_octaves_below", c.range_octaves_below);
  read(j, "range_octaves_above", c.range_octaves_above);
  read(j, "histogram_bins", c.histogram_bins);
  read(j, "smoothing_window_s", c.smoothing_window_s);
  read(j, "gate_octaves", c.gate_octaves);
  read(j, "local_max_radius_octaves", c.local_max_radius_octaves);
  read(j, "carry_limit_frames", c.carry_limit_frames);
  if (j.contains("variant")) {
    std::string v;
    read(j, "variant", v);
    c.variant = variant_from_string(v);
  }
  read(j, "refinement_enabled", c.refinement_enabled);
  read(j, "harmonic_variance_over_k2", c.harmonic_variance_over_k2);
  read(j, "bank_step_semitones", c.bank_step_semitones);
  read(j, "warp_upsample", c.warp_upsample);
  read(j, "sanity_gate_octaves", c.sanity_gate_octaves);
  read(j, "battery_duration_s", c.battery_duration_s);
  read(j, "battery_sample_rate", c.battery_sample_rate);
  read(j, "edge_exclusion_s", c.edge_exclusion_s);
  read(j, "seeds", c.seeds);
  c.validate();
  return c;
}

std::string config_digest(const AnalysisConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_json(config).dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace yangsaf
