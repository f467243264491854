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

// SI quantities used throughout the toolkit. Everything internal is strict SI
// (m, Hz, W, W/Hz, s); dBm and "per 20 pm" style views are conversions at the
// edges only.

#include <cmath>
#include <compare>
#include <limits>

#include "hetspec/errors.hpp"

namespace hetspec {

/// CODATA 2018 exact values.
struct PhysicalConstants {
  static constexpr double h = 6.62607015e-34;  // J s
  static constexpr double c = 299792458.0;     // m/s
  static constexpr double q = 1.602176634e-19;  // C
};

inline constexpr double kPlanck = PhysicalConstants::h;
inline constexpr double kSpeedOfLight = PhysicalConstants::c;
inline constexpr double kElementaryCharge = PhysicalConstants::q;
inline constexpr double kPi = 3.14159265358979323846;

/// Returned by watts_to_dbm(0).
inline constexpr double kNegInfDbm = -std::numeric_limits<double>::infinity();

class Wavelength {
 public:
  explicit Wavelength(double meters) : m_(meters) {
    detail::require(std::isfinite(meters) && meters > 0.0,
                    "wavelength must be positive and finite");
  }
  static Wavelength from_nm(double nm) { return Wavelength(nm * 1e-9); }

  double meters() const noexcept { return m_; }
  double nm() const noexcept { return m_ * 1e9; }

  auto operator<=>(const Wavelength&) const = default;

 private:
  double m_;
};

/// A non-negative width in wavelength (Δλ). Zero is allowed.
class WavelengthSpan {
 public:
  explicit WavelengthSpan(double meters) : m_(meters) {
    detail::require(std::isfinite(meters) && meters >= 0.0,
                    "wavelength span must be non-negative and finite");
  }
  static WavelengthSpan from_nm(double nm) { return WavelengthSpan(nm * 1e-9); }
  static WavelengthSpan from_pm(double pm) { return WavelengthSpan(pm * 1e-12); }

  double meters() const noexcept { return m_; }
  double nm() const noexcept { return m_ * 1e9; }
  double pm() const noexcept { return m_ * 1e12; }

  auto operator<=>(const WavelengthSpan&) const = default;

 private:
  double m_;
};

class Frequency {
 public:
  explicit Frequency(double hz) : hz_(hz) {
    detail::require(std::isfinite(hz) && hz >= 0.0,
                    "frequency must be non-negative and finite");
  }
  double hz() const noexcept { return hz_; }

  auto operator<=>(const Frequency&) const = default;

 private:
  double hz_;
};

inline double watts_to_dbm(double watts) {
  detail::require(watts >= 0.0, "power must be non-negative");
  if (watts == 0.0) return kNegInfDbm;
  return 10.0 * std::log10(watts) + 30.0;
}

inline double dbm_to_watts(double dbm) {
  if (dbm == kNegInfDbm) return 0.0;
  return std::pow(10.0, (dbm - 30.0) / 10.0);
}

/// Power ratio to decibels and back.
inline double to_db(double ratio) {
  detail::require(ratio >= 0.0, "power ratio must be non-negative");
  return 10.0 * std::log10(ratio);
}
inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

class OpticalPower {
 public:
  explicit OpticalPower(double watts) : w_(watts) {
    detail::require(std::isfinite(watts) && watts >= 0.0,
                    "optical power must be non-negative and finite");
  }
  static OpticalPower from_dbm(double dbm) { return OpticalPower(dbm_to_watts(dbm)); }

  double watts() const noexcept { return w_; }
  double dbm() const { return watts_to_dbm(w_); }

  auto operator<=>(const OpticalPower&) const = default;

 private:
  double w_;
};

inline Frequency wavelength_to_frequency(Wavelength wl) {
  return Frequency(kSpeedOfLight / wl.meters());
}

inline Wavelength frequency_to_wavelength(Frequency f) {
  detail::require(f.hz() > 0.0, "frequency must be positive");
  return Wavelength(kSpeedOfLight / f.hz());
}

/// Δλ = λ² Δν / c.
inline WavelengthSpan bandwidth_wl_from_freq(Frequency bw, Wavelength wl) {
  return WavelengthSpan(wl.meters() * wl.meters() * bw.hz() / kSpeedOfLight);
}

/// Δν = c Δλ / λ².
inline Frequency bandwidth_freq_from_wl(WavelengthSpan bw, Wavelength wl) {
  return Frequency(kSpeedOfLight * bw.meters() / (wl.meters() * wl.meters()));
}

/// hc/λ in joules.
inline double photon_energy(Wavelength wl) {
  return kPlanck * kSpeedOfLight / wl.meters();
}

inline double photon_energy(Frequency nu) {
  detail::require(nu.hz() > 0.0, "optical frequency must be positive");
  return kPlanck * nu.hz();
}

/// Optical power spectral density in W/Hz.
class PowerSpectralDensity {
 public:
  explicit PowerSpectralDensity(double w_per_hz) : v_(w_per_hz) {
    detail::require(std::isfinite(w_per_hz) && w_per_hz >= 0.0,
                    "power spectral density must be non-negative and finite");
  }

  /// e.g. (-64 dBm, 20 pm, 1550 nm) for "-64 dBm/20 pm".
  static PowerSpectralDensity from_dbm_per(double dbm, WavelengthSpan bw, Wavelength ref) {
    return from_power_per(OpticalPower::from_dbm(dbm), bw, ref);
  }
  static PowerSpectralDensity from_power_per(OpticalPower p, WavelengthSpan bw,
                                             Wavelength ref) {
    const double hz = bandwidth_freq_from_wl(bw, ref).hz();
    detail::require(hz > 0.0, "reference bandwidth must be positive");
    return PowerSpectralDensity(p.watts() / hz);
  }
  static PowerSpectralDensity from_dbm_per(double dbm, Frequency bw) {
    detail::require(bw.hz() > 0.0, "reference bandwidth must be positive");
    return PowerSpectralDensity(dbm_to_watts(dbm) / bw.hz());
  }

  double w_per_hz() const noexcept { return v_; }

  /// W/nm at the reference wavelength.
  double w_per_nm(Wavelength ref) const {
    return v_ * bandwidth_freq_from_wl(WavelengthSpan::from_nm(1.0), ref).hz();
  }
  double dbm_per(WavelengthSpan bw, Wavelength ref) const {
    return watts_to_dbm(v_ * bandwidth_freq_from_wl(bw, ref).hz());
  }
  double dbm_per(Frequency bw) const { return watts_to_dbm(v_ * bw.hz()); }

  auto operator<=>(const PowerSpectralDensity&) const = default;

 private:
  double v_;
};

}  // namespace hetspec
