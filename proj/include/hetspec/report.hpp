// Copyright 2026 The hetspec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Result persistence: CSV traces with a metadata header, JSON run records
// and comparison reports, and plain-text tables.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "hetspec/config.hpp"
#include "hetspec/errors.hpp"
#include "hetspec/scan.hpp"
#include "hetspec/signal_chain.hpp"
#include "hetspec/sources.hpp"

#ifndef HETSPEC_VERSION
#define HETSPEC_VERSION "0.0.0"
#endif

namespace hetspec {

inline constexpr const char* kVersion = HETSPEC_VERSION;
inline constexpr const char* kRfSchema = "hetspec.rf_spectrum/1";
inline constexpr const char* kOpticalSchema = "hetspec.optical_spectrum/1";
inline constexpr const char* kSourcesSchema = "hetspec.sources/1";

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// printf-style formatting into a std::string.
template <class... Args>
std::string format(const char* fmt, Args... args) {
  const int n = std::snprintf(nullptr, 0, fmt, args...);
  std::string s(static_cast<std::size_t>(n) + 1, '\0');
  std::snprintf(s.data(), s.size(), fmt, args...);
  s.resize(static_cast<std::size_t>(n));
  return s;
}

/// Shortest decimal text that round-trips the double.
inline std::string exact(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  if (std::isnan(v)) return "nan";
  for (int p = 6; p < 17; ++p) {
    std::string s = format("%.*g", p, v);
    if (std::strtod(s.c_str(), nullptr) == v) return s;
  }
  return format("%.17g", v);
}

inline void write_header(std::ostream& os, const char* schema, const std::string& command,
                         std::uint64_t seed, const Metadata& extra) {
  os << "# schema: " << schema << "\n";
  os << "# version: " << kVersion << "\n";
  os << "# command: " << command << "\n";
  os << "# seed: " << seed << "\n";
  for (const auto& [k, v] : extra) os << "# " << k << ": " << v << "\n";
}

inline void write_rf_csv(std::ostream& os, const RfSpectrum& s, const std::string& command,
                         const Metadata& extra = {}) {
  Metadata meta{{"rbw_hz", exact(s.rbw_hz)},
                {"vbw_hz", s.vbw_hz > 0 ? exact(s.vbw_hz) : "off"},
                {"rbw_shape", "gaussian"},
                {"video_filter", "single-pole, linear power"},
                {"detector", to_string(s.detector)}};
  meta.insert(meta.end(), extra.begin(), extra.end());
  write_header(os, kRfSchema, command, s.seed, meta);
  os << "frequency_hz,power_dbm\n";
  const auto dbm = s.power_dbm();
  for (std::size_t i = 0; i < s.frequency_hz.size(); ++i)
    os << exact(s.frequency_hz[i]) << "," << exact(dbm[i]) << "\n";
}

inline void write_optical_csv(std::ostream& os, const OpticalSpectrumResult& r,
                              const std::string& command, const Metadata& extra = {}) {
  Metadata meta{{"instrument", r.instrument},
                {"resolution_pm", exact(r.resolution.pm())},
                {"power", "dBm per resolution bandwidth"}};
  if (r.instrument == "grating-osa") {
    meta.emplace_back("lineshape", "gaussian");
    meta.emplace_back("noise_floor_dbm", exact(r.noise_floor_dbm));
  }
  for (const auto& w : r.warnings) meta.emplace_back("warning", w);
  meta.insert(meta.end(), extra.begin(), extra.end());
  write_header(os, kOpticalSchema, command, r.seed, meta);
  os << "wavelength_nm,power_dbm\n";
  for (std::size_t i = 0; i < r.wavelength_m.size(); ++i)
    os << exact(r.wavelength_m[i] * 1e9) << "," << exact(r.power_dbm[i]) << "\n";
}

// ---------------------------------------------------------------------------
// JSON views

inline json to_json(const PhotonMeasurement& m) {
  json j;
  j["db_above_shot"] = m.db_above_shot;
  j["measured_photons_per_mode"] = m.measured_photons;
  j["predicted_photons_per_mode"] = m.predicted_photons;
  j["predicted_signal_band"] = m.predicted_signal_band;
  j["predicted_image_band"] = m.predicted_image_band;
  j["predicted_db_above_shot"] = m.predicted_db;
  j["variance_ratio"] = m.variance_ratio;
  j["raw_db_above_floor"] = m.raw_db_above_floor;
  j["signal_power_dbm"] = watts_to_dbm(m.signal_power_w);
  j["baseline_power_dbm"] = watts_to_dbm(m.baseline_power_w);
  j["dark_power_dbm"] = watts_to_dbm(m.dark_power_w);
  j["clearance_db"] = m.clearance_db;
  j["expected_clearance_db"] = m.expected_clearance_db;
  j["shot_noise_limited"] = m.shot_noise_limited;
  j["trials"] = m.trials;
  j["warnings"] = m.warnings;
  return j;
}

inline json to_json(const ComparisonReport& r) {
  json j;
  j["scenario"] = {{"wavelength_nm", r.scenario.center.nm()},
                   {"signal_bandwidth_hz", r.scenario.signal_bandwidth_hz},
                   {"signal_power_dbm", watts_to_dbm(r.scenario.signal_power_w)},
                   {"efficiency", r.scenario.efficiency},
                   {"counting_threshold", r.scenario.counting_threshold}};
  j["instruments"] = json::array();
  for (const auto& row : r.rows) {
    j["instruments"].push_back({{"instrument", row.instrument},
                                {"min_detectable_psd_w_per_hz", row.min_detectable_psd_w_per_hz},
                                {"signal_psd_w_per_hz", row.signal_psd_w_per_hz},
                                {"margin_db", std::isfinite(row.margin_db) ? json(row.margin_db)
                                                                           : json(nullptr)},
                                {"detectable", row.detectable},
                                {"note", row.note}});
  }
  j["most_sensitive"] = r.most_sensitive;
  j["winner"] = r.winner;
  return j;
}

inline std::string comparison_table(const ComparisonReport& r) {
  std::string s = format("%-16s %16s %16s %10s  %s\n", "instrument", "min PSD (W/Hz)",
                         "signal (W/Hz)", "margin dB", "detectable");
  for (const auto& row : r.rows) {
    s += format("%-16s %16.4g %16.4g %10.2f  %s\n", row.instrument.c_str(),
                row.min_detectable_psd_w_per_hz, row.signal_psd_w_per_hz, row.margin_db,
                row.detectable ? "yes" : "no");
  }
  s += "most sensitive: " + r.most_sensitive + "\n";
  s += "best detecting: " + r.winner + "\n";
  return s;
}

/// One row per (source, detector) pair.
struct SourceVerdictRow {
  const SourceRow* source;
  const NamedDetector* detector;
  Verdict verdict;
};

inline std::vector<SourceVerdictRow> evaluate_sources(const SourcesScenario& sc) {
  std::vector<SourceVerdictRow> rows;
  for (const auto& s : sc.sources) {
    for (const auto& d : sc.detectors) {
      const PhotonsPerMode n(s.photons_per_mode);
      Verdict v = (s.type == "quantum_dot" && d.model.kind == DetectorKind::heterodyne_shot)
                      ? quantum_dot_assessment(s.photons_per_mode)
                      : verdict(n, d.model, sc.counting_threshold);
      rows.push_back({&s, &d, std::move(v)});
    }
  }
  return rows;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string optional_number(double v) {
  return std::isnan(v) ? "" : exact(v);
}

inline void write_sources_csv(std::ostream& os, const SourcesScenario& sc,
                              const std::vector<SourceVerdictRow>& rows) {
  write_header(os, kSourcesSchema, "sources", 0,
               {{"wavelength_nm", exact(sc.center.nm())}, {"window_s", exact(sc.window_s)},
                {"counting_threshold", exact(sc.counting_threshold)}});
  os << "source,type,photons_per_mode,photons_per_mode_rounded_n,mode_count,w_per_nm,"
        "photons_per_s_per_nm,detector,detector_noise_per_mode,snr,detectable,marginal,rationale\n";
  for (const auto& r : rows) {
    const auto& s = *r.source;
    os << csv_escape(s.name) << "," << s.type << "," << exact(s.photons_per_mode) << ","
       << optional_number(s.photons_per_mode_rounded_n) << ","
       << (s.mode_count > 0 ? exact(s.mode_count) : "") << ","
       << (s.type == "raman" ? exact(s.w_per_nm) : "") << ","
       << (s.type == "raman" ? exact(s.photons_per_s_per_nm) : "") << ","
       << csv_escape(r.detector->name) << "," << exact(r.verdict.detector_noise_per_mode) << ","
       << exact(r.verdict.snr) << "," << (r.verdict.detectable ? "true" : "false") << ","
       << (r.verdict.marginal ? "true" : "false") << "," << csv_escape(r.verdict.rationale)
       << "\n";
  }
}

inline json sources_json(const SourcesScenario& sc, const std::vector<SourceVerdictRow>& rows) {
  json j;
  j["schema"] = kSourcesSchema;
  j["wavelength_nm"] = sc.center.nm();
  j["window_s"] = sc.window_s;
  j["counting_threshold"] = sc.counting_threshold;
  j["rows"] = json::array();
  for (const auto& r : rows) {
    const auto& s = *r.source;
    json row{{"source", s.name},
             {"type", s.type},
             {"photons_per_mode", s.photons_per_mode}};
    if (!std::isnan(s.photons_per_mode_rounded_n))
      row["photons_per_mode_rounded_n"] = s.photons_per_mode_rounded_n;
    if (s.mode_count > 0) row["mode_count"] = s.mode_count;
    if (s.type == "raman") {
      row["w_per_nm"] = s.w_per_nm;
      row["photons_per_s_per_nm"] = s.photons_per_s_per_nm;
    }
    row["detector"] = r.detector->name;
    row["detector_noise_per_mode"] = r.verdict.detector_noise_per_mode;
    row["snr"] = std::isfinite(r.verdict.snr) ? json(r.verdict.snr) : json(nullptr);
    row["detectable"] = r.verdict.detectable;
    row["marginal"] = r.verdict.marginal;
    row["rationale"] = r.verdict.rationale;
    j["rows"].push_back(row);
  }
  return j;
}

inline std::string sources_table(const std::vector<SourceVerdictRow>& rows) {
  std::string s = format("%-14s %12s %12s  %-16s %12s %12s  %s\n", "source", "n/mode",
                         "n/mode(N~)", "detector", "noise/mode", "snr", "verdict");
  for (const auto& r : rows) {
    const auto& src = *r.source;
    const std::string rounded =
        std::isnan(src.photons_per_mode_rounded_n) ? "-" : format("%.3g", src.photons_per_mode_rounded_n);
    const char* what = r.verdict.detectable ? (r.verdict.marginal ? "detectable (marginal)" : "detectable")
                                            : (r.verdict.marginal ? "marginal" : "not detectable");
    s += format("%-14s %12.4g %12s  %-16s %12.4g %12.4g  %s\n", src.name.c_str(),
                src.photons_per_mode, rounded.c_str(), r.detector->name.c_str(),
                r.verdict.detector_noise_per_mode, r.verdict.snr, what);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Run records

struct RunRecord {
  std::string command;
  json config;  // verbatim copy of the inputs
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::vector<std::string> outputs;
  double wall_clock_s = 0.0;
};

inline json to_json(const RunRecord& r) {
  json j;
  j["command"] = r.command;
  j["version"] = kVersion;
  j["seed"] = r.seed;
  j["workers"] = r.workers;
  j["config"] = r.config;
  j["outputs"] = r.outputs;
  j["wall_clock_s"] = r.wall_clock_s;
  return j;
}

/// Default output directory: $HETSPEC_OUTPUT_DIR, else the working directory.
inline std::filesystem::path default_output_dir() {
  if (const char* env = std::getenv("HETSPEC_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

/// Writes `text` to dir/name and returns the path written.
inline std::string write_text_file(const std::filesystem::path& dir, const std::string& name,
                                   const std::string& text) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto path = dir / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw config_error("cannot write output file", path.string());
  f << text;
  if (!f) throw config_error("write failed", path.string());
  return path.string();
}

}  // namespace hetspec
