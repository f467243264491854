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

// Modal brightness of dim quantum-networking light sources (SPDC, fiber Raman,
// SFWM, quantum dots), noise-per-mode of competing spectrometers, and the
// detectability verdict that compares the two.

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "hetspec/errors.hpp"
#include "hetspec/modes.hpp"
#include "hetspec/units.hpp"

namespace hetspec {

/// Per-mode brightness of a source, with the mode count that produced it.
/// `per_mode_rounded_n` divides by the mode count rounded to one significant
/// figure.
struct ModalBrightness {
  double photon_rate = 0.0;  // photons/s in the bandwidth
  double mode_count = 0.0;   // modes in the bandwidth over the window
  double per_mode = 0.0;
  double per_mode_rounded_n = 0.0;

  PhotonsPerMode photons() const { return PhotonsPerMode(per_mode); }
};

struct SpdcSource {
  double pair_rate_density = 0.0;  // pairs/s per mW of pump per nm
  double pump_mw = 0.0;
  WavelengthSpan bandwidth{0.0};
  Wavelength center = Wavelength::from_nm(1550.0);
};

/// Photons per mode from a flat pair-rate density: (rate Δt) / N.
inline ModalBrightness spdc_photons_per_mode(const SpdcSource& s, double window_s) {
  detail::require(s.pair_rate_density >= 0.0 && s.pump_mw >= 0.0,
                  "SPDC rate density and pump power must be non-negative");
  detail::require(s.bandwidth.meters() > 0.0, "SPDC bandwidth must be positive");
  ModalBrightness b;
  b.photon_rate = s.pair_rate_density * s.pump_mw * s.bandwidth.nm();
  b.mode_count = mode_count(ModeWindow(s.bandwidth, s.center, window_s));
  b.per_mode = b.photon_rate * window_s / b.mode_count;
  b.per_mode_rounded_n = b.photon_rate * window_s / round_significant(b.mode_count, 1);
  return b;
}

/// Sign of the exponent in the Raman transmission factor 10^(±αL/10).
/// `conventional` applies the fiber loss as an attenuation.
enum class AttenuationSign { positive, conventional };

struct RamanChannel {
  double pump_w = 0.0;
  double length_km = 0.0;
  double cross_section = 0.0;  // ρ(λ), nm⁻¹ km⁻¹
  double attenuation_db_per_km = 0.0;
  Wavelength center = Wavelength::from_nm(1550.0);
  AttenuationSign sign = AttenuationSign::positive;
};

struct RamanOutput {
  double w_per_nm = 0.0;
  double photons_per_s_per_nm = 0.0;
  double modes_per_s_per_nm = 0.0;
  double per_mode = 0.0;
  double per_mode_rounded_n = 0.0;
};

/// P_SRS = P₀ L ρ(λ) 10^(±αL/10) in W/nm at the fiber output.
inline RamanOutput raman_output_psd(const RamanChannel& r) {
  detail::require(r.pump_w >= 0.0 && r.length_km >= 0.0 && r.cross_section >= 0.0 &&
                      r.attenuation_db_per_km >= 0.0,
                  "Raman channel parameters must be non-negative");
  const double exponent = r.attenuation_db_per_km * r.length_km / 10.0;
  const double factor =
      std::pow(10.0, r.sign == AttenuationSign::positive ? exponent : -exponent);
  RamanOutput out;
  out.w_per_nm = r.pump_w * r.length_km * r.cross_section * factor;
  out.photons_per_s_per_nm = out.w_per_nm / photon_energy(r.center);
  // Modes per second in a 1-nm slice; photons/mode is independent of Δt.
  out.modes_per_s_per_nm =
      mode_count(ModeWindow(WavelengthSpan::from_nm(1.0), r.center, 1.0));
  out.per_mode = out.photons_per_s_per_nm / out.modes_per_s_per_nm;
  out.per_mode_rounded_n =
      out.photons_per_s_per_nm / round_significant(out.modes_per_s_per_nm, 1);
  return out;
}

struct SfwmSource {
  double gamma = 0.0;  // W⁻¹ km⁻¹
  double pump_w = 0.0;
  double length_km = 0.0;
};

/// |γ P₀ L|².
inline PhotonsPerMode sfwm_photons_per_mode(const SfwmSource& s) {
  detail::require(s.gamma >= 0.0 && s.pump_w >= 0.0 && s.length_km >= 0.0,
                  "SFWM parameters must be non-negative");
  const double x = s.gamma * s.pump_w * s.length_km;
  return PhotonsPerMode(x * x);
}

/// Dark counts per mode behind a tunable filter: dark_rate λ² / (c Δλ).
inline double snspd_noise_per_mode(double dark_rate, WavelengthSpan filter_bw, Wavelength wl) {
  detail::require(dark_rate >= 0.0, "dark count rate must be non-negative");
  detail::require(filter_bw.meters() > 0.0, "filter bandwidth must be positive");
  return dark_rate / bandwidth_freq_from_wl(filter_bw, wl).hz();
}

/// Photon-equivalent noise of a grating OSA whose sensitivity is `dbm` in a
/// `resolution` bin.
inline double grating_osa_noise_per_mode(double sensitivity_dbm, WavelengthSpan resolution,
                                         Wavelength wl) {
  detail::require(resolution.meters() > 0.0, "resolution must be positive");
  const auto psd = PowerSpectralDensity::from_dbm_per(sensitivity_dbm, resolution, wl);
  return photons_per_mode(psd, wavelength_to_frequency(wl), 1.0).value;
}

enum class DetectorKind { heterodyne_shot, grating_osa, snspd_filtered };

inline const char* to_string(DetectorKind k) {
  switch (k) {
    case DetectorKind::heterodyne_shot: return "heterodyne";
    case DetectorKind::grating_osa: return "grating-osa";
    case DetectorKind::snspd_filtered: return "snspd-filtered";
  }
  return "?";
}

struct DetectorNoiseModel {
  DetectorKind kind = DetectorKind::heterodyne_shot;
  double noise_per_mode = 1.0;
  // Kind-specific parameters, kept for reporting.
  double sensitivity_dbm = 0.0;
  double dark_rate = 0.0;
  WavelengthSpan bandwidth{0.0};
  Wavelength center = Wavelength::from_nm(1550.0);

  static DetectorNoiseModel heterodyne(Wavelength wl = Wavelength::from_nm(1550.0)) {
    DetectorNoiseModel m;
    m.center = wl;
    return m;
  }
  static DetectorNoiseModel grating_osa(double sensitivity_dbm, WavelengthSpan resolution,
                                        Wavelength wl) {
    DetectorNoiseModel m;
    m.kind = DetectorKind::grating_osa;
    m.sensitivity_dbm = sensitivity_dbm;
    m.bandwidth = resolution;
    m.center = wl;
    m.noise_per_mode = grating_osa_noise_per_mode(sensitivity_dbm, resolution, wl);
    return m;
  }
  static DetectorNoiseModel snspd_filtered(double dark_rate, WavelengthSpan filter_bw,
                                           Wavelength wl) {
    DetectorNoiseModel m;
    m.kind = DetectorKind::snspd_filtered;
    m.dark_rate = dark_rate;
    m.bandwidth = filter_bw;
    m.center = wl;
    m.noise_per_mode = snspd_noise_per_mode(dark_rate, filter_bw, wl);
    return m;
  }
};

struct Verdict {
  double source_photons_per_mode = 0.0;
  double detector_noise_per_mode = 0.0;
  double snr = 0.0;
  bool detectable = false;
  bool marginal = false;
  std::string rationale;
};

inline constexpr double kDefaultCountingThreshold = 10.0;

namespace detail {

inline std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace detail

/// Heterodyne: SNR = <n> against one shot-noise photon per mode, detectable
/// from SNR 1. Counting detectors (OSA, SNSPD): detectable once the source
/// exceeds the per-mode noise by `counting_threshold`.
inline Verdict verdict(PhotonsPerMode source, const DetectorNoiseModel& det,
                       double counting_threshold = kDefaultCountingThreshold) {
  detail::require(counting_threshold > 0.0, "detectability threshold must be positive");
  Verdict v;
  v.source_photons_per_mode = source.value;
  v.detector_noise_per_mode = det.noise_per_mode;
  if (det.kind == DetectorKind::heterodyne_shot) {
    v.snr = snr_from_photons_per_mode(source);
    v.detectable = v.snr >= 1.0;
    v.marginal = v.detectable && v.snr < 2.0;
    const auto regime = classify_snr(v.snr);
    if (v.detectable) {
      v.rationale = "SNR " + detail::fmt_g(v.snr) + " against LO shot noise (1 photon/mode)";
    } else {
      v.rationale = std::string("LO shot noise limited: SNR ") + to_string(regime) +
                    "; not practically detectable with a heterodyne spectrometer";
    }
    return v;
  }
  v.snr = det.noise_per_mode > 0.0 ? source.value / det.noise_per_mode
                                   : (source.value > 0.0
                                          ? std::numeric_limits<double>::infinity()
                                          : 0.0);
  v.detectable = v.snr >= counting_threshold;
  v.marginal = v.snr >= 1.0 && v.snr < counting_threshold;
  const std::string what = det.kind == DetectorKind::grating_osa ? "grating OSA noise floor"
                                                                 : "SNSPD dark counts";
  v.rationale = (v.detectable ? "source exceeds " : "limited by ") + what + " (ratio " +
                detail::fmt_g(v.snr) + ", threshold " + detail::fmt_g(counting_threshold) + ")";
  return v;
}

/// Single-photon emitters put at most one photon into each mode; by default
/// that sits exactly on the heterodyne limit and is not practically
/// detectable. Brightness above one can be supplied to override.
inline Verdict quantum_dot_assessment(double photons_per_mode = 1.0) {
  Verdict v = verdict(PhotonsPerMode(photons_per_mode), DetectorNoiseModel::heterodyne());
  if (photons_per_mode <= 1.0) {
    v.marginal = photons_per_mode == 1.0;
    v.detectable = false;
    v.rationale = v.marginal
                      ? "single-photon emitter at one photon per mode: boundary SNR 1, marginal; "
                        "not practically detectable with a heterodyne spectrometer"
                      : "single-photon emitter below one photon per mode: not detectable";
  }
  return v;
}

}  // namespace hetspec
