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

// LO-swept heterodyne spectrometer, grating-OSA emulation, and the
// side-by-side sensitivity comparison with a filtered SNSPD.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hetspec/errors.hpp"
#include "hetspec/modes.hpp"
#include "hetspec/parallel.hpp"
#include "hetspec/rng.hpp"
#include "hetspec/signal_chain.hpp"
#include "hetspec/sources.hpp"
#include "hetspec/units.hpp"

namespace hetspec {

/// Optical PSD sampled on an ascending wavelength grid.
struct Spectrum {
  std::vector<double> wavelength_m;
  std::vector<double> psd_w_per_hz;

  void validate() const {
    detail::require(wavelength_m.size() == psd_w_per_hz.size(), "spectrum arrays must match");
    for (std::size_t i = 1; i < wavelength_m.size(); ++i)
      detail::require(wavelength_m[i] > wavelength_m[i - 1], "spectrum grid must be ascending");
    for (double s : psd_w_per_hz) detail::require(s >= 0.0, "spectrum PSD must be non-negative");
  }

  static std::vector<double> grid(Wavelength start, Wavelength stop, WavelengthSpan step) {
    detail::require(stop > start, "grid stop must exceed start");
    detail::require(step.meters() > 0.0, "grid step must be positive");
    const auto n = static_cast<std::size_t>(
                       std::floor((stop.meters() - start.meters()) / step.meters() + 1e-9)) + 1;
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
      g[i] = start.meters() + static_cast<double>(i) * step.meters();
    return g;
  }

  static Spectrum from_ase(const AseSpec& ase, std::vector<double> grid_m) {
    Spectrum s{std::move(grid_m), {}};
    s.psd_w_per_hz.reserve(s.wavelength_m.size());
    for (double wl : s.wavelength_m) s.psd_w_per_hz.push_back(ase.psd_at(kSpeedOfLight / wl));
    return s;
  }

  /// A line much narrower than the grid: all its power in the nearest bin.
  static Spectrum from_line(Wavelength center, double power_w, std::vector<double> grid_m) {
    Spectrum s{std::move(grid_m), {}};
    s.psd_w_per_hz.assign(s.wavelength_m.size(), 0.0);
    if (s.wavelength_m.size() < 2) return s;
    auto it = std::lower_bound(s.wavelength_m.begin(), s.wavelength_m.end(), center.meters());
    std::size_t i = static_cast<std::size_t>(it - s.wavelength_m.begin());
    if (i == s.wavelength_m.size()) --i;
    if (i > 0 && center.meters() - s.wavelength_m[i - 1] < s.wavelength_m[i] - center.meters()) --i;
    const double bin_m = s.bin_width_m(i);
    const double bin_hz = kSpeedOfLight * bin_m / (s.wavelength_m[i] * s.wavelength_m[i]);
    s.psd_w_per_hz[i] = power_w / bin_hz;
    return s;
  }

  double bin_width_m(std::size_t i) const {
    const auto& g = wavelength_m;
    if (g.size() < 2) return 0.0;
    if (i == 0) return g[1] - g[0];
    if (i + 1 == g.size()) return g[i] - g[i - 1];
    return 0.5 * (g[i + 1] - g[i - 1]);
  }
};

struct ScanPlan {
  Wavelength start = Wavelength::from_nm(1549.0);
  Wavelength stop = Wavelength::from_nm(1551.0);
  WavelengthSpan step = WavelengthSpan::from_pm(1.0);
  LaserSpec lo;  // detuning is set per step
  DetectorSpec detector;
  EsaSpec esa;   // center frequency, RBW and per-step dwell
  double sample_rate = 32e6;
  SimulationLimits limits;

  void validate() const {
    if (!(stop > start)) throw config_error("scan stop must exceed start");
    if (!(step.meters() > 0.0)) throw config_error("scan step must be positive");
    lo.validate();
    detector.validate();
    esa.validate();
    if (esa.center_hz + 2.0 * esa.rbw_hz > 0.5 * sample_rate)
      throw config_error("detection frequency plus RBW margin exceeds Nyquist");
    if (!(lo.power_w > 0.0)) throw config_error("scan LO power must be positive");
  }

  std::vector<double> grid() const { return Spectrum::grid(start, stop, step); }
};

/// Narrow laser line at an absolute wavelength, scanned by the LO.
struct LaserLine {
  Wavelength center = Wavelength::from_nm(1550.0);
  LaserSpec laser;
};

using ScanInput = std::variant<std::monostate, AseSpec, LaserLine>;

struct OpticalSpectrumResult {
  std::string instrument;
  std::vector<double> wavelength_m;
  std::vector<double> psd_w_per_hz;  // optical-referred
  std::vector<double> power_dbm;     // per effective resolution
  WavelengthSpan resolution{0.0};
  double noise_floor_dbm = kNegInfDbm;  // grating emulation only
  std::uint64_t seed = 0;
  std::optional<ScanPlan> plan;
  std::vector<std::string> warnings;
};

/// Effective heterodyne resolution: the LO linewidth or the two RBW-wide
/// sidebands around the LO, whichever is wider.
inline double scan_resolution_hz(const ScanPlan& plan) {
  return std::max(plan.lo.linewidth_hz, 2.0 * plan.esa.rbw_hz);
}

/// Optical PSD inferred from a mean ESA reading at the detection frequency.
/// The LO power and the receiver transfer are known exactly, and all excess
/// noise is attributed to one sideband, so an LO-only input reads as one
/// photon per mode (hν/η).
inline double calibrate_to_optical_psd(double rf_power_w, const ScanPlan& plan, double optical_hz) {
  const double i_psd = rf_power_to_current_psd(rf_power_w, plan.detector, plan.esa,
                                               plan.esa.center_hz, plan.sample_rate);
  const double r = plan.detector.responsivity_at(optical_hz) * plan.detector.efficiency;
  return i_psd / (2.0 * r * r * plan.lo.power_w);
}

/// Steps the LO across the plan and records the calibrated RF power at the
/// detection frequency at each step. Each step draws from its own seed, so
/// the result is independent of `workers`.
inline OpticalSpectrumResult run_scan(const ScanPlan& plan, const ScanInput& input,
                                      std::uint64_t seed, unsigned workers = 1) {
  plan.validate();
  const auto grid = plan.grid();
  OpticalSpectrumResult out;
  out.instrument = "heterodyne";
  out.seed = seed;
  out.plan = plan;
  out.wavelength_m = grid;
  out.psd_w_per_hz.resize(grid.size());
  out.power_dbm.resize(grid.size());

  const double res_hz = scan_resolution_hz(plan);
  const Wavelength mid((plan.start.meters() + plan.stop.meters()) / 2.0);
  out.resolution = bandwidth_wl_from_freq(Frequency(res_hz), mid);
  if (plan.step < bandwidth_wl_from_freq(Frequency(plan.lo.linewidth_hz), mid))
    out.warnings.emplace_back("scan step is finer than the LO linewidth");
  const double step_hz = bandwidth_freq_from_wl(plan.step, mid).hz();
  if (const auto* a = std::get_if<AseSpec>(&input)) {
    if (a->shape == AseSpec::Shape::top_hat && a->edge_10_90_hz < step_hz)
      out.warnings.emplace_back("input band edges are narrower than the scan step");
  } else if (const auto* l = std::get_if<LaserLine>(&input)) {
    if (l->laser.linewidth_hz + 2.0 * plan.esa.rbw_hz < step_hz)
      out.warnings.emplace_back("input line is narrower than the scan step");
  }

  std::vector<char> truncated(grid.size(), 0);
  parallel_for(grid.size(), workers, [&](std::size_t i) {
    const double nu = kSpeedOfLight / grid[i];
    OpticalWindow w{nu, plan.sample_rate, plan.esa.dwell_s};
    const std::uint64_t step_seed = derive_seed(seed, i, Stream::scan_step);
    LaserSpec lo = plan.lo;
    lo.detuning_hz = 0.0;
    FieldTrace lo_trace = synth_laser(lo, w, derive_seed(step_seed, 0, Stream::lo), plan.limits);

    FieldTrace sig;
    if (const auto* a = std::get_if<AseSpec>(&input)) {
      sig = synth_ase(*a, w, derive_seed(step_seed, 0, Stream::signal), true, plan.limits);
      truncated[i] = sig.warnings.empty() ? 0 : 1;
    } else if (const auto* l = std::get_if<LaserLine>(&input)) {
      LaserSpec s = l->laser;
      s.detuning_hz = wavelength_to_frequency(l->center).hz() - nu;
      if (std::fabs(s.detuning_hz) + 0.5 * s.dither_span_hz < 0.5 * plan.sample_rate)
        sig = synth_laser(s, w, derive_seed(step_seed, 0, Stream::signal), plan.limits);
      else
        sig = FieldTrace::dark(w);
    } else {
      sig = FieldTrace::dark(w);
    }
    auto [a1, a2] = mix_50_50(sig, lo_trace);
    const auto v =
        balanced_detect(a1, a2, plan.detector, nu, derive_seed(step_seed, 0, Stream::detector));
    const double p_rf = band_power(v, plan.esa.center_hz, plan.esa.rbw_hz, plan.esa.load_ohms);
    out.psd_w_per_hz[i] = calibrate_to_optical_psd(p_rf, plan, nu);
    out.power_dbm[i] = watts_to_dbm(out.psd_w_per_hz[i] * res_hz);
  });
  if (std::any_of(truncated.begin(), truncated.end(), [](char c) { return c != 0; }))
    out.warnings.emplace_back("input band truncated to the per-step simulation window");
  return out;
}

/// Grating spectrometer: Gaussian instrument function of FWHM `resolution`
/// normalised so a flat PSD reads PSD × resolution, plus a fixed noise floor
/// per resolution bandwidth. Output is sampled `samples_per_resolution`
/// times per resolution bandwidth over the input range.
inline OpticalSpectrumResult grating_osa_emulate(const Spectrum& truth, WavelengthSpan resolution,
                                                 double noise_floor_dbm,
                                                 int samples_per_resolution = 4) {
  truth.validate();
  detail::require(resolution.meters() > 0.0, "resolution must be positive");
  detail::require(samples_per_resolution > 0, "samples per resolution must be positive");
  detail::require(truth.wavelength_m.size() >= 2, "spectrum needs at least two points");

  const double res = resolution.meters();
  const double sigma = res / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  const double peak = res / (sigma * std::sqrt(2.0 * kPi));
  const double floor_w = dbm_to_watts(noise_floor_dbm);

  OpticalSpectrumResult out;
  out.instrument = "grating-osa";
  out.resolution = resolution;
  out.noise_floor_dbm = noise_floor_dbm;
  out.wavelength_m = Spectrum::grid(Wavelength(truth.wavelength_m.front()),
                                    Wavelength(truth.wavelength_m.back()),
                                    WavelengthSpan(res / samples_per_resolution));

  // S_λ dλ per input bin, in watts.
  std::vector<double> bin_power(truth.wavelength_m.size());
  for (std::size_t i = 0; i < bin_power.size(); ++i) {
    const double wl = truth.wavelength_m[i];
    bin_power[i] = truth.psd_w_per_hz[i] * kSpeedOfLight / (wl * wl) * truth.bin_width_m(i);
  }

  const double reach = 6.0 * sigma;
  for (double wl_out : out.wavelength_m) {
    auto lo = std::lower_bound(truth.wavelength_m.begin(), truth.wavelength_m.end(), wl_out - reach);
    auto hi = std::upper_bound(truth.wavelength_m.begin(), truth.wavelength_m.end(), wl_out + reach);
    double reading = floor_w;
    for (auto it = lo; it != hi; ++it) {
      const auto i = static_cast<std::size_t>(it - truth.wavelength_m.begin());
      const double x = (wl_out - *it) / sigma;
      reading += bin_power[i] * peak * std::exp(-0.5 * x * x);
    }
    const double res_hz = kSpeedOfLight * res / (wl_out * wl_out);
    out.psd_w_per_hz.push_back(reading / res_hz);
    out.power_dbm.push_back(watts_to_dbm(reading));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Shape metrics

struct EdgeWidths {
  double rising_m = std::numeric_limits<double>::quiet_NaN();
  double falling_m = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  return v[mid];
}

inline double crossing(const std::vector<double>& x, const std::vector<double>& y, std::size_t i,
                       double level) {
  // y[i-1] and y[i] straddle level.
  const double t = (level - y[i - 1]) / (y[i] - y[i - 1]);
  return x[i - 1] + t * (x[i] - x[i - 1]);
}

/// Linear power per bin (the PSD; shape metrics are scale-free).
inline const std::vector<double>& linear(const OpticalSpectrumResult& r) { return r.psd_w_per_hz; }

inline double outer_baseline(const std::vector<double>& y) {
  const std::size_t k = std::max<std::size_t>(3, y.size() / 20);
  std::vector<double> edge(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(std::min(k, y.size())));
  edge.insert(edge.end(), y.end() - static_cast<std::ptrdiff_t>(std::min(k, y.size())), y.end());
  return median(edge);
}

}  // namespace detail

/// 10-90 % widths of the outermost rising and falling edges of a band, with
/// levels taken between the out-of-band baseline and the in-band plateau.
inline EdgeWidths edge_widths_10_90(const OpticalSpectrumResult& r) {
  const auto& x = r.wavelength_m;
  const auto& y = detail::linear(r);
  EdgeWidths e;
  if (y.size() < 4) return e;
  const double base = detail::outer_baseline(y);
  const double top_max = *std::max_element(y.begin(), y.end());
  std::vector<double> plateau;
  for (double v : y)
    if (v >= base + 0.5 * (top_max - base)) plateau.push_back(v);
  const double top = detail::median(plateau);
  const double l10 = base + 0.1 * (top - base);
  const double l90 = base + 0.9 * (top - base);

  std::optional<double> a, b;
  for (std::size_t i = 1; i < y.size() && !b; ++i) {
    if (!a && y[i - 1] < l10 && y[i] >= l10) a = detail::crossing(x, y, i, l10);
    if (a && y[i - 1] < l90 && y[i] >= l90) b = detail::crossing(x, y, i, l90);
  }
  if (a && b) e.rising_m = *b - *a;

  a.reset();
  b.reset();
  for (std::size_t i = y.size() - 1; i >= 1 && !b; --i) {
    // walking leftwards: y[i] is outside, y[i-1] inside
    if (!a && y[i] < l10 && y[i - 1] >= l10) a = detail::crossing(x, y, i, l10);
    if (a && y[i] < l90 && y[i - 1] >= l90) b = detail::crossing(x, y, i, l90);
  }
  if (a && b) e.falling_m = *a - *b;
  return e;
}

/// Full width at half maximum of the highest peak above the out-of-band
/// baseline, in metres.
inline double fwhm(const OpticalSpectrumResult& r) {
  const auto& x = r.wavelength_m;
  const auto& y = detail::linear(r);
  if (y.size() < 3) return std::numeric_limits<double>::quiet_NaN();
  const auto ip = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
  const double base = detail::outer_baseline(y);
  const double half = base + 0.5 * (y[ip] - base);
  std::optional<double> left, right;
  for (std::size_t i = ip; i >= 1; --i)
    if (y[i - 1] < half && y[i] >= half) {
      left = detail::crossing(x, y, i, half);
      break;
    }
  for (std::size_t i = ip + 1; i < y.size(); ++i)
    if (y[i - 1] >= half && y[i] < half) {
      right = detail::crossing(x, y, i, half);
      break;
    }
  if (!left || !right) return std::numeric_limits<double>::quiet_NaN();
  return *right - *left;
}

/// Floor of a scan in photons per mode: the median of the lowest 10 % of
/// bins, through <n> = S η / (hν).
inline double scan_floor_photons(const OpticalSpectrumResult& scan, double efficiency) {
  if (scan.psd_w_per_hz.empty()) return 1.0;
  std::vector<double> v = scan.psd_w_per_hz;
  std::sort(v.begin(), v.end());
  v.resize(std::max<std::size_t>(1, v.size() / 10));
  const double s = detail::median(v);
  const double wl = scan.wavelength_m[scan.wavelength_m.size() / 2];
  return s * efficiency / photon_energy(Wavelength(wl));
}

// ---------------------------------------------------------------------------
// Sensitivity comparison

struct ComparisonScenario {
  Wavelength center = Wavelength::from_nm(1550.0);
  double signal_bandwidth_hz = 0.0;
  double signal_power_w = 0.0;
  double efficiency = 1.0;
  double counting_threshold = kDefaultCountingThreshold;
};

struct InstrumentSensitivity {
  std::string instrument;
  double min_detectable_psd_w_per_hz = 0.0;  // for a signal of the scenario's bandwidth
  double signal_psd_w_per_hz = 0.0;
  double margin_db = 0.0;  // signal over the instrument's detection threshold
  bool detectable = false;
  std::string note;
};

struct ComparisonReport {
  ComparisonScenario scenario;
  std::vector<InstrumentSensitivity> rows;
  std::string most_sensitive;   // lowest minimum detectable PSD
  std::string winner;           // most sensitive instrument that detects, or "none"
};

/// Minimum detectable PSD of each instrument for the scenario's signal:
///   heterodyne: the scan floor in photons per mode (one, when shot-noise
///     limited), diluted when the signal is narrower than the scan
///     resolution;
///   grating OSA: its fixed floor per resolution bandwidth, which is not
///     reduced for signals narrower than the resolution;
///   SNSPD + filter: dark counts per mode times the counting threshold.
inline ComparisonReport compare_sensitivity(const OpticalSpectrumResult& scan,
                                            const OpticalSpectrumResult& osa,
                                            const DetectorNoiseModel& snspd,
                                            const ComparisonScenario& sc) {
  detail::require(sc.signal_bandwidth_hz > 0.0, "signal bandwidth must be positive");
  detail::require(sc.signal_power_w >= 0.0, "signal power must be non-negative");
  detail::require(snspd.kind == DetectorKind::snspd_filtered, "expected an SNSPD noise model");
  const double h_nu = photon_energy(sc.center);
  const double eta = sc.efficiency;
  const double bw = sc.signal_bandwidth_hz;
  const double psd = sc.signal_power_w / bw;
  ComparisonReport rep;
  rep.scenario = sc;
  auto margin = [](double num, double den) {
    if (num <= 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(num / den);
  };

  {
    InstrumentSensitivity h;
    h.instrument = "heterodyne";
    const double res = bandwidth_freq_from_wl(scan.resolution, sc.center).hz();
    const double floor_n = scan_floor_photons(scan, eta);
    const double dilution = std::max(1.0, res / bw);
    h.signal_psd_w_per_hz = psd;
    h.min_detectable_psd_w_per_hz = floor_n * h_nu / eta * dilution;
    const double seen_n = psd / dilution * eta / h_nu;
    h.margin_db = margin(seen_n, floor_n);
    h.detectable = seen_n >= floor_n;
    h.note = "photons/mode " + detail::fmt_g(seen_n) + " vs floor " + detail::fmt_g(floor_n) +
             (h.detectable ? " (>= 3 dB above shot noise)" : "");
    rep.rows.push_back(h);
  }
  {
    InstrumentSensitivity o;
    o.instrument = "grating-osa";
    const double res = bandwidth_freq_from_wl(osa.resolution, sc.center).hz();
    const double floor_w = dbm_to_watts(osa.noise_floor_dbm);
    const double reading = psd * std::min(bw, res);
    o.signal_psd_w_per_hz = psd;
    o.min_detectable_psd_w_per_hz = floor_w / std::min(bw, res);
    o.margin_db = margin(reading, floor_w);
    o.detectable = reading > 0.0 && o.margin_db >= -1e-9;
    o.note = "reading " + detail::fmt_g(watts_to_dbm(reading)) + " dBm vs floor " +
             detail::fmt_g(osa.noise_floor_dbm) + " dBm per resolution";
    rep.rows.push_back(o);
  }
  {
    InstrumentSensitivity s;
    s.instrument = "snspd-filtered";
    const double fbw = bandwidth_freq_from_wl(snspd.bandwidth, sc.center).hz();
    const double per_mode = psd * std::min(bw, fbw) / fbw * eta / h_nu;
    const double need = sc.counting_threshold * snspd.noise_per_mode;
    s.signal_psd_w_per_hz = psd;
    s.min_detectable_psd_w_per_hz = need * h_nu / eta * fbw / std::min(bw, fbw);
    s.margin_db = margin(per_mode, need);
    s.detectable = per_mode >= need;
    s.note = "photons/mode " + detail::fmt_g(per_mode) + " vs dark " +
             detail::fmt_g(snspd.noise_per_mode) + " counts/mode";
    rep.rows.push_back(s);
  }

  const auto best = std::min_element(rep.rows.begin(), rep.rows.end(), [](auto& a, auto& b) {
    return a.min_detectable_psd_w_per_hz < b.min_detectable_psd_w_per_hz;
  });
  rep.most_sensitive = best->instrument;
  rep.winner = "none";
  double best_detecting = std::numeric_limits<double>::infinity();
  for (const auto& r : rep.rows)
    if (r.detectable && r.min_detectable_psd_w_per_hz < best_detecting) {
      best_detecting = r.min_detectable_psd_w_per_hz;
      rep.winner = r.instrument;
    }
  return rep;
}

}  // namespace hetspec
