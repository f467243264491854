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

// Strict JSON configuration readers for simulation runs, scan plans, scan
// inputs and source scenarios. Unknown keys are errors; every error names
// the path of the offending key.

#include <algorithm>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hetspec/errors.hpp"
#include "hetspec/scan.hpp"
#include "hetspec/signal_chain.hpp"
#include "hetspec/sources.hpp"
#include "hetspec/unit_parser.hpp"
#include "json.hpp"

namespace hetspec {

using json = nlohmann::ordered_json;

/// Reads one JSON object, tracking which keys were consumed.
class ConfigReader {
 public:
  ConfigReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw config_error("expected an object", display_path());
  }

  const std::string& path() const { return path_; }
  bool has(const std::string& key) const { return j_.contains(key); }

  std::string key_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  /// Fails listing every missing key at once.
  void require_keys(std::initializer_list<const char*> keys) const {
    std::string missing;
    for (const char* k : keys)
      if (!j_.contains(k)) missing += (missing.empty() ? "" : ", ") + std::string(k);
    if (!missing.empty())
      throw config_error("missing required field(s): " + missing, display_path());
  }

  template <class F>
  auto parse(const std::string& key, F&& fn) -> decltype(fn(std::string_view{})) {
    const json& v = at(key);
    if (!v.is_string())
      throw config_error("expected a string with units, e.g. \"1550nm\"", key_path(key));
    try {
      return fn(v.get_ref<const std::string&>());
    } catch (const config_error& e) {
      throw config_error(e.what(), key_path(key));
    }
  }

  template <class F, class T>
  T parse_or(const std::string& key, F&& fn, T fallback) {
    return has(key) ? parse(key, std::forward<F>(fn)) : fallback;
  }

  double number(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number()) throw config_error("expected a number", key_path(key));
    return v.get<double>();
  }

  double number_or(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  std::size_t count(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number_unsigned()) throw config_error("expected a non-negative integer", key_path(key));
    return v.get<std::size_t>();
  }

  std::size_t count_or(const std::string& key, std::size_t fallback) {
    return has(key) ? count(key) : fallback;
  }

  bool boolean_or(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_boolean()) throw config_error("expected true or false", key_path(key));
    return v.get<bool>();
  }

  std::string string(const std::string& key) {
    const json& v = at(key);
    if (!v.is_string()) throw config_error("expected a string", key_path(key));
    return v.get<std::string>();
  }

  std::string choice(const std::string& key, std::initializer_list<const char*> options,
                     const char* fallback) {
    const std::string s = has(key) ? string(key) : fallback;
    std::string list;
    for (const char* o : options) {
      if (s == o) return s;
      list += (list.empty() ? "" : ", ") + std::string(o);
    }
    throw config_error("unknown value '" + s + "' (expected one of " + list + ")", key_path(key));
  }

  ConfigReader child(const std::string& key) { return ConfigReader(at(key), key_path(key)); }

  const json& array(const std::string& key) {
    const json& v = at(key);
    if (!v.is_array()) throw config_error("expected an array", key_path(key));
    return v;
  }

  /// Throws on keys that were never read.
  void done() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) throw config_error("unknown key", key_path(k));
  }

 private:
  const json& at(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) throw config_error("missing required field", key_path(key));
    return j_.at(key);
  }
  std::string display_path() const { return path_.empty() ? "<root>" : path_; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

/// Parses JSON text; an empty document reads as an empty object.
inline json parse_json_text(const std::string& text, const std::string& origin) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return json::object();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("invalid JSON: ") + e.what(), origin);
  }
}

inline json load_json_file(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw config_error("cannot open file", file);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), file);
}

// ---------------------------------------------------------------------------
// Component readers

inline DitherWaveform parse_dither_waveform(ConfigReader& r) {
  return r.choice("dither_waveform", {"sine", "triangle"}, "sine") == "sine"
             ? DitherWaveform::sine
             : DitherWaveform::triangle;
}

/// LO or narrow input laser. `detuning` is relative to the window reference.
inline LaserSpec read_laser(ConfigReader r, bool allow_detuning = true) {
  LaserSpec s;
  s.power_w = r.parse("power", parse_power).watts();
  if (allow_detuning) s.detuning_hz = r.parse_or("detuning", parse_frequency_offset, 0.0);
  s.linewidth_hz = r.parse_or("linewidth", parse_frequency, Frequency(0.0)).hz();
  s.dither_span_hz = r.parse_or("dither_span", parse_frequency, Frequency(0.0)).hz();
  s.dither_rate_hz = r.parse_or("dither_rate", parse_frequency, Frequency(0.0)).hz();
  s.dither_waveform = parse_dither_waveform(r);
  if (r.has("rin"))
    s.rin_dbc_per_hz = r.parse("rin", [](std::string_view t) { return parse_as(t, Dimension::rin); });
  r.done();
  return s;
}

inline DetectorSpec read_detector(ConfigReader r) {
  DetectorSpec d;
  d.efficiency = r.number_or("efficiency", 1.0);
  if (!(d.efficiency >= 0.0 && d.efficiency <= 1.0))
    throw config_error("must lie in [0, 1]", r.key_path("efficiency"));
  if (r.has("responsivity"))
    d.responsivity =
        r.parse("responsivity", [](std::string_view t) { return parse_as(t, Dimension::responsivity); });
  if (r.has("gain_stages")) {
    const json& g = r.array("gain_stages");
    if (g.empty()) throw config_error("needs at least one stage", r.key_path("gain_stages"));
    d.gain_stages.clear();
    for (std::size_t i = 0; i < g.size(); ++i) {
      const std::string p = r.key_path("gain_stages") + "[" + std::to_string(i) + "]";
      if (!g[i].is_number() || !(g[i].get<double>() > 0.0))
        throw config_error("expected a positive number", p);
      d.gain_stages.push_back(g[i].get<double>());
    }
  }
  d.lowpass_corner_hz = r.parse_or("lowpass_corner", parse_frequency, Frequency(0.0)).hz();
  if (r.has("electronics_noise"))
    d.electronics_noise = r.parse("electronics_noise", [](std::string_view t) {
      const double v = parse_as(t, Dimension::current_noise);
      if (v < 0.0) throw config_error("must be non-negative");
      return v;
    });
  d.detection_bandwidth_hz =
      r.parse_or("detection_bandwidth", parse_frequency, Frequency(0.0)).hz();
  r.done();
  return d;
}

inline EsaSpec read_esa(ConfigReader r) {
  EsaSpec e;
  e.center_hz = r.parse("center", parse_frequency).hz();
  e.span_hz = r.parse_or("span", parse_frequency, Frequency(0.0)).hz();
  e.rbw_hz = r.parse("rbw", parse_frequency).hz();
  if (r.has("vbw")) {
    e.vbw_hz = r.parse("vbw", [](std::string_view t) {
      return t == "off" ? 0.0 : parse_frequency(t).hz();
    });
  }
  e.points = r.count_or("points", 1);
  e.dwell_s = r.parse_or("dwell", parse_duration, e.dwell_s);
  const std::string det = r.choice("detector", {"average", "sample", "peak"}, "average");
  e.detector = det == "average" ? EsaDetector::average
               : det == "sample" ? EsaDetector::sample
                                 : EsaDetector::peak;
  e.load_ohms = r.parse_or("load", [](std::string_view t) { return parse_as(t, Dimension::resistance); },
                           50.0);
  r.done();
  try {
    e.validate();
  } catch (const config_error& err) {
    throw config_error(err.what(), r.path());
  }
  return e;
}

/// Top-hat or tabulated ASE band. Edges are given as absolute wavelengths
/// ("low"/"high"), as a center and width, or, when `reference_hz` is
/// positive, as frequency offsets from it ("low_offset"/"high_offset").
/// The level is either "psd" (e.g. "-64dBm/20pm") or "photons_per_mode".
inline AseSpec read_ase(ConfigReader& r, double reference_hz) {
  const std::string shape = r.choice("shape", {"top_hat", "table"}, "top_hat");
  AseSpec a;
  if (shape == "table") {
    a.shape = AseSpec::Shape::table;
    const json& pts = r.array("points");
    std::vector<std::pair<double, double>> rows;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      ConfigReader p(pts[i], r.key_path("points") + "[" + std::to_string(i) + "]");
      const Wavelength wl = p.parse("wavelength", parse_wavelength);
      const double psd = p.parse("psd", [&](std::string_view t) { return parse_psd(t, wl); });
      p.done();
      rows.emplace_back(wavelength_to_frequency(wl).hz(), psd);
    }
    std::sort(rows.begin(), rows.end());
    for (const auto& [f, s] : rows) {
      a.table_hz.push_back(f);
      a.table_psd.push_back(s);
    }
  } else {
    double lo = 0.0, hi = 0.0;
    if (r.has("low") || r.has("high")) {
      const double l_wl = r.parse("low", parse_wavelength).meters();
      const double h_wl = r.parse("high", parse_wavelength).meters();
      lo = kSpeedOfLight / std::max(l_wl, h_wl);
      hi = kSpeedOfLight / std::min(l_wl, h_wl);
    } else if (r.has("low_offset") || r.has("high_offset")) {
      if (!(reference_hz > 0.0))
        throw config_error("offsets need a reference wavelength", r.key_path("low_offset"));
      lo = reference_hz + r.parse("low_offset", parse_frequency_offset);
      hi = reference_hz + r.parse("high_offset", parse_frequency_offset);
    } else {
      r.require_keys({"center", "width"});
      const Wavelength c = r.parse("center", parse_wavelength);
      const double bw = bandwidth_hz(r.parse("width", parse_bandwidth), c).hz();
      const double nu = wavelength_to_frequency(c).hz();
      lo = nu - 0.5 * bw;
      hi = nu + 0.5 * bw;
    }
    if (!(hi > lo)) throw config_error("band is empty or inverted", r.path());
    const double edge = r.parse_or("edge", parse_frequency, Frequency(100e6)).hz();
    const double nu_mid = 0.5 * (lo + hi);
    double psd = 0.0;
    if (r.has("psd") == r.has("photons_per_mode"))
      throw config_error("give exactly one of psd, photons_per_mode", r.path());
    if (r.has("psd")) {
      const Wavelength c = frequency_to_wavelength(Frequency(nu_mid));
      psd = r.parse("psd", [&](std::string_view t) { return parse_psd(t, c); });
    } else {
      const double n = r.number("photons_per_mode");
      if (n < 0.0) throw config_error("must be non-negative", r.key_path("photons_per_mode"));
      psd = n * kPlanck * nu_mid;
    }
    a = AseSpec::top_hat_band(lo, hi, psd, edge);
  }
  try {
    a.validate();
  } catch (const std::exception& e) {
    throw config_error(e.what(), r.path());
  }
  return a;
}

// ---------------------------------------------------------------------------
// Documents

/// Single-point heterodyne simulation.
inline HeterodyneConfig read_simulate_config(const json& doc) {
  ConfigReader r(doc, "");
  r.require_keys({"wavelength", "lo", "detector", "esa"});
  HeterodyneConfig c;
  const Wavelength wl = r.parse("wavelength", parse_wavelength);
  c.window.reference_hz = wavelength_to_frequency(wl).hz();
  c.window.sample_rate = r.parse_or("sample_rate", parse_frequency, Frequency(64e6)).hz();
  c.window.duration_s = r.parse_or("duration", parse_duration, c.window.duration_s);
  c.trials = r.count_or("trials", c.trials);
  if (c.trials == 0) throw config_error("must be at least 1", "trials");
  c.clearance_margin_db = r.parse_or(
      "clearance_margin", [](std::string_view t) { return parse_as(t, Dimension::ratio_db); },
      c.clearance_margin_db);
  c.allow_truncation = r.boolean_or("allow_truncation", false);
  c.limits.max_samples = r.count_or("max_samples", c.limits.max_samples);
  c.lo = read_laser(r.child("lo"));
  if (r.has("input")) {
    ConfigReader in = r.child("input");
    const std::string type = in.choice("type", {"none", "ase", "laser"}, "none");
    if (type == "ase") {
      c.input = read_ase(in, c.window.reference_hz);
      in.done();
    } else if (type == "laser") {
      json rest = doc.at("input");
      rest.erase("type");
      c.input = read_laser(ConfigReader(rest, "input"));
    } else {
      in.done();
    }
  }
  c.detector = read_detector(r.child("detector"));
  c.esa = read_esa(r.child("esa"));
  r.done();
  return c;
}

/// Grating spectrometer emulated alongside a scan.
struct GratingSpec {
  WavelengthSpan resolution = WavelengthSpan::from_pm(20.0);
  double noise_floor_dbm = -90.0;
  int samples_per_resolution = 4;
};

/// Filtered SNSPD used in the sensitivity comparison.
struct SnspdSpec {
  double dark_rate = 100.0;
  WavelengthSpan filter = WavelengthSpan::from_pm(20.0);
};

struct ScanConfig {
  ScanPlan plan;
  std::optional<GratingSpec> grating;
  std::optional<SnspdSpec> snspd;
  double counting_threshold = kDefaultCountingThreshold;
};

inline ScanConfig read_scan_plan(const json& doc) {
  ConfigReader r(doc, "");
  r.require_keys({"start", "stop", "step", "lo", "esa"});
  ScanConfig c;
  auto& p = c.plan;
  p.start = r.parse("start", parse_wavelength);
  p.stop = r.parse("stop", parse_wavelength);
  p.step = r.parse("step", parse_wavelength_span);
  if (!(p.step.meters() > 0.0)) throw config_error("scan step must be positive", "step");
  if (!(p.stop > p.start)) throw config_error("scan stop must exceed start", "stop");
  p.sample_rate = r.parse_or("sample_rate", parse_frequency, Frequency(p.sample_rate)).hz();
  p.limits.max_samples = r.count_or("max_samples", p.limits.max_samples);
  p.lo = read_laser(r.child("lo"), false);
  if (r.has("detector")) p.detector = read_detector(r.child("detector"));
  p.esa = read_esa(r.child("esa"));
  if (r.has("grating")) {
    ConfigReader g = r.child("grating");
    GratingSpec gs;
    gs.resolution = g.parse_or("resolution", parse_wavelength_span, gs.resolution);
    if (!(gs.resolution.meters() > 0.0))
      throw config_error("must be positive", g.key_path("resolution"));
    gs.noise_floor_dbm = g.parse_or("noise_floor", parse_dbm, gs.noise_floor_dbm);
    const std::size_t spr = g.count_or("samples_per_resolution", 4);
    if (spr == 0 || spr > 1000)
      throw config_error("must lie in [1, 1000]", g.key_path("samples_per_resolution"));
    gs.samples_per_resolution = static_cast<int>(spr);
    g.done();
    c.grating = gs;
  }
  if (r.has("snspd")) {
    ConfigReader s = r.child("snspd");
    SnspdSpec ss;
    ss.dark_rate = s.number_or("dark_rate", ss.dark_rate);
    if (ss.dark_rate < 0.0) throw config_error("must be non-negative", s.key_path("dark_rate"));
    ss.filter = s.parse_or("filter", parse_wavelength_span, ss.filter);
    if (!(ss.filter.meters() > 0.0)) throw config_error("must be positive", s.key_path("filter"));
    s.done();
    c.snspd = ss;
  }
  c.counting_threshold = r.number_or("counting_threshold", c.counting_threshold);
  if (!(c.counting_threshold > 0.0)) throw config_error("must be positive", "counting_threshold");
  r.done();
  try {
    p.validate();
  } catch (const std::exception& e) {
    throw config_error(e.what(), "<root>");
  }
  return c;
}

/// Scan input: none, an absolute-wavelength ASE band, or a laser line.
inline ScanInput read_scan_input(const json& doc) {
  ConfigReader r(doc, "");
  const std::string type = r.choice("type", {"none", "ase", "laser"}, "none");
  if (type == "ase") {
    AseSpec a = read_ase(r, 0.0);
    r.done();
    return a;
  }
  if (type == "laser") {
    LaserLine line;
    line.center = r.parse("center", parse_wavelength);
    json rest = doc;
    rest.erase("type");
    rest.erase("center");
    line.laser = read_laser(ConfigReader(rest, ""), false);
    return line;
  }
  r.done();
  return std::monostate{};
}

/// Signal bandwidth and power of a scan input, for the comparison report.
inline ComparisonScenario scenario_for(const ScanInput& in, const ScanPlan& plan, double threshold) {
  ComparisonScenario sc;
  sc.center = Wavelength(0.5 * (plan.start.meters() + plan.stop.meters()));
  sc.efficiency = plan.detector.efficiency;
  sc.counting_threshold = threshold;
  sc.signal_bandwidth_hz = 1.0 / plan.esa.dwell_s;
  if (const auto* a = std::get_if<AseSpec>(&in)) {
    if (a->shape == AseSpec::Shape::top_hat) {
      sc.center = a->center;
      sc.signal_bandwidth_hz = bandwidth_freq_from_wl(a->width, a->center).hz();
      sc.signal_power_w = a->psd_w_per_hz * sc.signal_bandwidth_hz;
    } else {
      double p = 0.0;
      for (std::size_t i = 1; i < a->table_hz.size(); ++i)
        p += 0.5 * (a->table_psd[i] + a->table_psd[i - 1]) * (a->table_hz[i] - a->table_hz[i - 1]);
      sc.signal_bandwidth_hz = a->table_hz.back() - a->table_hz.front();
      sc.signal_power_w = p;
      sc.center = frequency_to_wavelength(Frequency(0.5 * (a->table_hz.front() + a->table_hz.back())));
    }
  } else if (const auto* l = std::get_if<LaserLine>(&in)) {
    sc.center = l->center;
    sc.signal_bandwidth_hz =
        std::max({l->laser.linewidth_hz, l->laser.dither_span_hz, 1.0 / plan.esa.dwell_s});
    sc.signal_power_w = l->laser.power_w;
  }
  return sc;
}

/// True input spectrum on a fine grid, for the grating emulation.
inline Spectrum truth_spectrum(const ScanInput& in, const ScanPlan& plan, WavelengthSpan resolution) {
  const double step = std::min(plan.step.meters(), resolution.meters() / 20.0);
  auto grid = Spectrum::grid(plan.start, plan.stop, WavelengthSpan(step));
  if (const auto* a = std::get_if<AseSpec>(&in)) return Spectrum::from_ase(*a, std::move(grid));
  if (const auto* l = std::get_if<LaserLine>(&in))
    return Spectrum::from_line(l->center, l->laser.power_w, std::move(grid));
  Spectrum s{std::move(grid), {}};
  s.psd_w_per_hz.assign(s.wavelength_m.size(), 0.0);
  return s;
}

// ---------------------------------------------------------------------------
// Source scenarios

struct SourceRow {
  std::string name;
  std::string type;
  double photons_per_mode = 0.0;
  double photons_per_mode_rounded_n = 0.0;  // NaN when not applicable
  double mode_count = 0.0;                  // 0 when not applicable
  double w_per_nm = 0.0;                    // Raman only
  double photons_per_s_per_nm = 0.0;        // Raman only
};

struct NamedDetector {
  std::string name;
  DetectorNoiseModel model;
};

struct SourcesScenario {
  Wavelength center = Wavelength::from_nm(1550.0);
  double window_s = 1.0;
  double counting_threshold = kDefaultCountingThreshold;
  std::vector<SourceRow> sources;
  std::vector<NamedDetector> detectors;
};

inline SourcesScenario read_sources_scenario(const json& doc) {
  ConfigReader r(doc, "");
  r.require_keys({"sources", "detectors"});
  SourcesScenario sc;
  sc.center = r.parse_or("wavelength", parse_wavelength, sc.center);
  sc.window_s = r.parse_or("window", parse_duration, sc.window_s);
  if (!(sc.window_s > 0.0)) throw config_error("must be positive", "window");
  sc.counting_threshold = r.number_or("counting_threshold", sc.counting_threshold);
  if (!(sc.counting_threshold > 0.0)) throw config_error("must be positive", "counting_threshold");

  const json& srcs = r.array("sources");
  if (srcs.empty()) throw config_error("needs at least one source", "sources");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < srcs.size(); ++i) {
    ConfigReader s(srcs[i], "sources[" + std::to_string(i) + "]");
    s.require_keys({"type"});
    SourceRow row;
    row.type = s.choice("type", {"spdc", "raman", "sfwm", "quantum_dot", "flat"}, "spdc");
    row.name = s.has("name") ? s.string("name") : row.type;
    row.photons_per_mode_rounded_n = nan;
    try {
      if (row.type == "spdc") {
        s.require_keys({"pair_rate_density", "pump", "bandwidth"});
        SpdcSource src;
        src.pair_rate_density = s.number("pair_rate_density");
        src.pump_mw = s.parse("pump", parse_power).watts() * 1e3;
        src.bandwidth = s.parse("bandwidth", parse_wavelength_span);
        src.center = sc.center;
        const auto b = spdc_photons_per_mode(src, sc.window_s);
        row.photons_per_mode = b.per_mode;
        row.photons_per_mode_rounded_n = b.per_mode_rounded_n;
        row.mode_count = b.mode_count;
      } else if (row.type == "raman") {
        s.require_keys({"pump", "length", "cross_section", "attenuation"});
        RamanChannel ch;
        ch.pump_w = s.parse("pump", parse_power).watts();
        ch.length_km = s.parse("length", [](std::string_view t) {
          return parse_as(t, Dimension::length) / 1e3;
        });
        ch.cross_section = s.number("cross_section");
        ch.attenuation_db_per_km =
            s.parse("attenuation", [](std::string_view t) { return parse_as(t, Dimension::attenuation); });
        ch.sign = s.choice("attenuation_sign", {"positive", "conventional"}, "positive") ==
                          "positive"
                      ? AttenuationSign::positive
                      : AttenuationSign::conventional;
        ch.center = sc.center;
        const auto o = raman_output_psd(ch);
        row.photons_per_mode = o.per_mode;
        row.photons_per_mode_rounded_n = o.per_mode_rounded_n;
        row.mode_count = o.modes_per_s_per_nm * sc.window_s;
        row.w_per_nm = o.w_per_nm;
        row.photons_per_s_per_nm = o.photons_per_s_per_nm;
      } else if (row.type == "sfwm") {
        s.require_keys({"gamma", "pump", "length"});
        SfwmSource src;
        src.gamma = s.number("gamma");
        src.pump_w = s.parse("pump", parse_power).watts();
        src.length_km =
            s.parse("length", [](std::string_view t) { return parse_as(t, Dimension::length) / 1e3; });
        row.photons_per_mode = sfwm_photons_per_mode(src).value;
      } else if (row.type == "quantum_dot") {
        row.photons_per_mode = s.number_or("photons_per_mode", 1.0);
      } else {
        s.require_keys({"psd"});
        const double psd = s.parse("psd", [&](std::string_view t) { return parse_psd(t, sc.center); });
        const double eta = s.number_or("efficiency", 1.0);
        row.photons_per_mode =
            photons_per_mode(PowerSpectralDensity(psd),
                             wavelength_to_frequency(sc.center), eta)
                .value;
      }
    } catch (const domain_error& e) {
      throw config_error(e.what(), s.path());
    }
    s.done();
    sc.sources.push_back(row);
  }

  const json& dets = r.array("detectors");
  if (dets.empty()) throw config_error("needs at least one detector", "detectors");
  for (std::size_t i = 0; i < dets.size(); ++i) {
    ConfigReader d(dets[i], "detectors[" + std::to_string(i) + "]");
    d.require_keys({"type"});
    NamedDetector nd;
    const std::string type = d.choice("type", {"heterodyne", "grating_osa", "snspd"}, "heterodyne");
    nd.name = d.has("name") ? d.string("name") : type;
    try {
      if (type == "heterodyne") {
        nd.model = DetectorNoiseModel::heterodyne(sc.center);
      } else if (type == "grating_osa") {
        d.require_keys({"sensitivity", "resolution"});
        nd.model = DetectorNoiseModel::grating_osa(d.parse("sensitivity", parse_dbm),
                                                   d.parse("resolution", parse_wavelength_span),
                                                   sc.center);
      } else {
        d.require_keys({"dark_rate", "filter"});
        nd.model = DetectorNoiseModel::snspd_filtered(
            d.number("dark_rate"), d.parse("filter", parse_wavelength_span), sc.center);
      }
    } catch (const domain_error& e) {
      throw config_error(e.what(), d.path());
    }
    d.done();
    sc.detectors.push_back(nd);
  }
  r.done();
  return sc;
}

}  // namespace hetspec
