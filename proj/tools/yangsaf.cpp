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

// yangsaf: F0 / aperiodicity analysis, test-signal synthesis and the
// evaluation batteries from the command line.
//
// Exit codes: 0 ok, 1 usage or I/O error, 2 acceptance check failed.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "yangsaf/acceptance.hpp"
#include "yangsaf/config.hpp"
#include "yangsaf/evaluation.hpp"
#include "yangsaf/refinement.hpp"
#include "yangsaf/testgen.hpp"
#include "yangsaf/wav.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace yangsaf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCheck = 2;
constexpr int kReportHarmonics = 10;
constexpr const char* kVersion = "0.1.0";

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out << text;
  if (!out) throw IoError(path.string() + ": write failed");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError(dir.string() + ": cannot create directory");
}

AnalysisConfig load_config(const std::string& path) {
  AnalysisConfig c = path.empty() ? AnalysisConfig{} : config_from_json(read_text(path));
  c.validate();
  return c;
}

json manifest(const std::string& command, const AnalysisConfig& config) {
  json m;
  m["tool"] = "yangsaf";
  m["version"] = kVersion;
  m["command"] = command;
  m["config_digest"] = config_digest(config);
  m["config"] = json::parse(config_to_json(config));
  return m;
}

std::string f0_csv(const F0Trajectory& t) {
  std::ostringstream out;
  out << "time_s,f0_hz,variance,masked\n";
  for (std::size_t j = 0; j < t.size(); ++j)
    out << format_number(t.times[j]) << ',' << format_number(t.f0[j]) << ',' << format_number(t.variance[j])
        << ',' << (t.is_masked(j) ? 1 : 0) << '\n';
  return out.str();
}

std::string aperiodicity_csv(const HarmonicReport& r, const std::vector<double>& times) {
  std::ostringstream out;
  out << "time_s";
  for (int k = 1; k <= r.harmonics; ++k) out << ",ap_" << k << "_db";
  out << '\n';
  for (std::size_t j = 0; j < times.size(); ++j) {
    out << format_number(times[j]);
    for (int k = 1; k <= r.harmonics; ++k) {
      const double a = j < r.frames() ? r.aperiodicity[r.index(j, k)] : NAN;
      out << ',' << format_number(a > 0.0 ? 10.0 * std::log10(a) : NAN);
    }
    out << '\n';
  }
  return out.str();
}

json maps_json(const FrameMaps& maps) {
  auto grid = [&](const std::vector<double>& v) {
    json rows = json::array();
    for (std::size_t j = 0; j < maps.frames(); ++j) {
      json row = json::array();
      for (std::size_t c = 0; c < maps.channels(); ++c) row.push_back(v[maps.index(j, c)]);
      rows.push_back(std::move(row));
    }
    return rows;
  };
  json m;
  m["frame_rate"] = maps.frame_rate;
  m["sample_rate"] = maps.sample_rate;
  m["frame_times"] = maps.frame_times;
  m["channel_centers_hz"] = maps.layout.centers;
  m["inst_freq_hz"] = grid(maps.if_map);
  m["aperiodicity"] = grid(maps.ap_map);
  m["probability"] = grid(maps.prob_map);
  return m;
}

// Plot scripts are plain matplotlib reading the CSV next to them.
constexpr const char* kFmtfPlot = R"PY(#!/usr/bin/env python3
"""Renders the FM battery: FMTF gain (H / T chains) and RMS error with the
piecewise-linear baselines. Usage: python3 plot_fmtf.py [curves.csv]"""
import csv, sys, os
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(__file__), "curves.csv")
rows = list(csv.DictReader(open(path)))
col = lambda k: [float(r[k]) for r in rows]
f = col("mod_hz")
fig, ax = plt.subplots(1, 2, figsize=(11, 4))
ax[0].semilogx(f, col("gain_H"), "o-", label="H10 H3")
ax[0].semilogx(f, col("gain_T"), "s-", label="T10 T10 H3")
ax[0].axhline(2 ** -0.5, color="gray", ls=":", label="-3 dB")
ax[0].set_xlabel("modulation frequency (Hz)"); ax[0].set_ylabel("FMTF gain"); ax[0].legend()
ax[1].loglog(f, col("rms_cents_H"), "o-", label="H10 H3")
ax[1].loglog(f, col("rms_cents_T"), "s-", label="T10 T10 H3")
ax[1].loglog(f, col("pwl_5ms_cents"), "k--", label="piecewise linear 5 ms")
ax[1].loglog(f, col("pwl_1ms_cents"), "k:", label="piecewise linear 1 ms")
ax[1].set_xlabel("modulation frequency (Hz)"); ax[1].set_ylabel("RMS error (cents)"); ax[1].legend()
fig.tight_layout()
fig.savefig(os.path.splitext(path)[0] + ".png", dpi=120)
)PY";

constexpr const char* kSnrPlot = R"PY(#!/usr/bin/env python3
"""Renders RMS F0 error against SNR. Usage: python3 plot_snr.py [snr.csv]"""
import csv, sys, os, math
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(__file__), "snr.csv")
rows = list(csv.DictReader(open(path)))
col = lambda k: [float(r[k]) for r in rows]
fig, ax = plt.subplots(figsize=(6, 4))
ax.semilogy(col("snr_db"), col("rms_cents_initial"), "o-", label="initial estimate")
ax.semilogy(col("snr_db"), col("rms_cents_H"), "s-", label="H10 H3")
t = col("rms_cents_T")
if not all(math.isnan(v) for v in t):
    ax.semilogy(col("snr_db"), t, "^-", label="T10 T10 H3")
ax.set_xlabel("SNR (dB)"); ax.set_ylabel("RMS error (cents)"); ax.legend()
fig.tight_layout()
fig.savefig(os.path.splitext(path)[0] + ".png", dpi=120)
)PY";

int report_checks(const std::vector<CheckResult>& checks, const fs::path& out_dir) {
  bool ok = true;
  std::ostringstream report;
  for (const auto& c : checks) {
    report << format_check(c) << '\n';
    ok = ok && c.pass;
  }
  write_text(out_dir / "check.txt", report.str());
  (ok ? std::cout : std::cerr) << report.str();
  return ok ? kExitOk : kExitCheck;
}

// ---------------------------------------------------------------------------

struct AnalyzeArgs {
  std::string input, out_dir, config, variant;
  bool emit_maps = false;
  bool no_refine = false;
};

int cmd_analyze(const AnalyzeArgs& a) {
  AnalysisConfig config = load_config(a.config);
  if (!a.variant.empty()) config.variant = variant_from_string(a.variant);
  if (a.no_refine) config.refinement_enabled = false;
  const AudioBuffer x = read_wav(a.input);
  const PipelineResult result = run_pipeline(x, config);

  const fs::path out(a.out_dir);
  ensure_dir(out);
  write_text(out / "f0.csv", f0_csv(result.refined));
  HarmonicReport report = result.report;
  if (report.harmonics == 0) report.resize(0, kReportHarmonics);  // refinement off: no detector outputs
  write_text(out / "aperiodicity.csv", aperiodicity_csv(report, result.refined.times));
  if (a.emit_maps) write_text(out / "maps.json", maps_json(result.analysis.maps).dump() + "\n");

  json m = manifest("analyze", config);
  m["input"] = fs::path(a.input).filename().string();
  m["sample_rate"] = x.sample_rate();
  m["samples"] = x.size();
  m["variant"] = to_string(config.variant);
  m["frames"] = result.refined.size();
  m["unmasked_frames"] = result.refined.unmasked_count();
  m["search_range_hz"] = {result.analysis.range.lo, result.analysis.range.hi};
  m["outputs"] = a.emit_maps ? json{"f0.csv", "aperiodicity.csv", "maps.json"} : json{"f0.csv", "aperiodicity.csv"};
  write_text(out / "manifest.json", m.dump(2) + "\n");
  return kExitOk;
}

struct SynthArgs {
  std::string out;
  TestSignalSpec spec;
  double snr_db = NAN;
};

int cmd_synth(SynthArgs a) {
  if (std::isfinite(a.snr_db)) a.spec.snr_db = a.snr_db;
  a.spec.validate();  // before touching the file system
  const auto [x, truth] = synthesize(a.spec);
  const fs::path wav(a.out);
  if (wav.has_parent_path()) ensure_dir(wav.parent_path());
  std::ostringstream csv;
  csv << "time_s,f0_hz\n";
  for (std::size_t i = 0; i < truth.size(); ++i)
    csv << format_number(truth.times[i]) << ',' << format_number(truth.f0[i]) << '\n';
  write_wav(wav.string(), x);
  write_text(wav.parent_path() / "truth.csv", csv.str());
  return kExitOk;
}

struct BatteryArgs {
  std::string out_dir, config;
  bool check = false;
  bool no_refine = false;
  bool with_warped = false;
  double f0 = 120.0;
  double depth = 100.0;
  double snr_db = 100.0;
  std::vector<double> mod_hz;
  std::vector<double> snr_list;
  std::vector<std::uint64_t> seeds;
};

AnalysisConfig battery_config(const BatteryArgs& a) {
  AnalysisConfig config = load_config(a.config);
  if (a.no_refine) config.refinement_enabled = false;
  if (!a.seeds.empty()) config.seeds = a.seeds;
  config.validate();
  return config;
}

int cmd_fmtf(const BatteryArgs& a) {
  const AnalysisConfig config = battery_config(a);
  FmtfBattery battery = acceptance_fmtf_battery();
  battery.f0_mean = a.f0;
  battery.depth_cents = a.depth;
  battery.snr_db = a.snr_db;
  if (!a.mod_hz.empty()) battery.mod_freqs = a.mod_hz;
  const fs::path out(a.out_dir);
  ensure_dir(out);
  const auto rows = fmtf_sweep(config, battery);
  write_text(out / "curves.csv", fmtf_csv(rows));
  write_text(out / "plot_fmtf.py", kFmtfPlot);
  json m = manifest("fmtf", config);
  m["battery"] = {{"f0_hz", battery.f0_mean}, {"depth_cents", battery.depth_cents},
                  {"snr_db", battery.snr_db}, {"mod_hz", battery.mod_freqs}};
  const auto h = fmtf_curve(rows, Variant::kHarmonic).minus3db;
  const auto t = fmtf_curve(rows, Variant::kWarped).minus3db;
  m["minus3db_hz"] = {{"H", h.frequency}, {"H_lower_bound", h.is_lower_bound},
                      {"T", t.frequency}, {"T_lower_bound", t.is_lower_bound}};
  write_text(out / "manifest.json", m.dump(2) + "\n");
  return a.check ? report_checks(check_fm_battery(rows, battery), out) : kExitOk;
}

int cmd_snr_sweep(const BatteryArgs& a) {
  const AnalysisConfig config = battery_config(a);
  const auto snrs = a.snr_list.empty() ? acceptance_snr_list() : a.snr_list;
  const fs::path out(a.out_dir);
  ensure_dir(out);
  const auto rows = snr_sweep(config, snrs, a.f0, a.with_warped);
  write_text(out / "snr.csv", snr_sweep_csv(rows));
  write_text(out / "plot_snr.py", kSnrPlot);
  json m = manifest("snr-sweep", config);
  m["battery"] = {{"f0_hz", a.f0}, {"snr_db", snrs}};
  write_text(out / "manifest.json", m.dump(2) + "\n");
  return a.check ? report_checks({check_noise_robustness(rows)}, out) : kExitOk;
}

int cmd_config(const std::string& in, const std::string& out) {
  const AnalysisConfig config = load_config(in);
  const std::string text = config_to_json(config);
  if (out.empty())
    std::cout << text;
  else
    write_text(out, text);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"yangsaf: F0 and aperiodicity analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  AnalyzeArgs analyze;
  auto* an = app.add_subcommand("analyze", "Analyze a mono WAV file");
  an->add_option("input", analyze.input, "Input WAV (PCM16 or float32, mono)")->required();
  an->add_option("-o,--out-dir", analyze.out_dir, "Output directory")->required();
  an->add_option("-c,--config", analyze.config, "Config JSON");
  an->add_option("--variant", analyze.variant, "Refinement chain: H or T (overrides config)");
  an->add_flag("--emit-maps", analyze.emit_maps, "Also write maps.json");
  an->add_flag("--no-refine", analyze.no_refine, "Stop after the initial estimate");

  SynthArgs synth;
  auto* sy = app.add_subcommand("synth", "Synthesize an FM harmonic test signal");
  sy->add_option("-o,--out", synth.out, "Output WAV; truth.csv is written beside it")->required();
  sy->add_option("--f0", synth.spec.f0_mean, "Mean F0 (Hz)");
  sy->add_option("--depth-cents", synth.spec.depth_cents, "Peak-to-peak modulation depth (cents)");
  sy->add_option("--mod-hz", synth.spec.mod_freq, "Modulation frequency (Hz)");
  sy->add_option("--harmonics", synth.spec.n_harmonics, "Harmonic count (0: fill to 0.9 Nyquist)");
  sy->add_option("--slope-db", synth.spec.harmonic_slope_db, "Harmonic slope (dB/octave)");
  sy->add_option("--duration", synth.spec.duration, "Duration (s)");
  sy->add_option("--fs", synth.spec.sample_rate, "Sample rate (Hz)");
  sy->add_option("--snr-db", synth.snr_db, "Add white noise at this SNR (dB)");
  sy->add_option("--seed", synth.spec.seed, "Noise seed");

  BatteryArgs fm;
  auto* fmc = app.add_subcommand("fmtf", "FM battery: FMTF and RMS error of both chains");
  BatteryArgs sn;
  auto* snc = app.add_subcommand("snr-sweep", "Constant-F0 noise battery");
  for (auto [cmd, args] : {std::pair{fmc, &fm}, std::pair{snc, &sn}}) {
    cmd->add_option("-o,--out-dir", args->out_dir, "Output directory")->required();
    cmd->add_option("-c,--config", args->config, "Config JSON");
    cmd->add_flag("--check", args->check, "Apply the acceptance thresholds (exit 2 on failure)");
    cmd->add_flag("--no-refine", args->no_refine, "Disable refinement (negative control)");
    cmd->add_option("--f0", args->f0, "F0 (Hz)");
    cmd->add_option("--seeds", args->seeds, "Noise seeds (overrides config)")->delimiter(',');
  }
  fmc->add_option("--depth-cents", fm.depth, "Peak-to-peak modulation depth (cents)");
  fmc->add_option("--snr-db", fm.snr_db, "SNR of the added noise (dB)");
  fmc->add_option("--mod-hz", fm.mod_hz, "Modulation frequencies (Hz)")->delimiter(',');
  snc->add_option("--snr", sn.snr_list, "SNR values (dB)")->delimiter(',');
  snc->add_flag("--with-warped", sn.with_warped, "Also run the T chain");

  std::string cfg_in, cfg_out;
  auto* cf = app.add_subcommand("config", "Print the default (or a validated) config");
  cf->add_option("-c,--config", cfg_in, "Config JSON to validate and normalize");
  cf->add_option("-o,--out", cfg_out, "Write to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*an) return cmd_analyze(analyze);
    if (*sy) return cmd_synth(synth);
    if (*fmc) return cmd_fmtf(fm);
    if (*snc) return cmd_snr_sweep(sn);
    if (*cf) return cmd_config(cfg_in, cfg_out);
  } catch (const std::exception& e) {
    std::cerr << "yangsaf: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
