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

// Spectral-temporal mode accounting for heterodyne detection: how many modes
// a bandwidth/time window holds, the one-photon-per-mode quantum limit, and
// the quadrature-variance <-> photon-number dictionary.

#include <algorithm>
#include <cmath>

#include "hetspec/errors.hpp"
#include "hetspec/units.hpp"

namespace hetspec {

class ModeWindow {
 public:
  ModeWindow(Frequency bandwidth, double duration_s, int polarizations = 1)
      : bw_(bandwidth), dt_(duration_s), pol_(polarizations) {
    detail::require(std::isfinite(duration_s) && duration_s > 0.0,
                    "integration time must be positive");
    detail::require(polarizations == 1 || polarizations == 2,
                    "polarizations must be 1 or 2");
  }
  ModeWindow(WavelengthSpan bandwidth, Wavelength center, double duration_s,
             int polarizations = 1)
      : ModeWindow(bandwidth_freq_from_wl(bandwidth, center), duration_s, polarizations) {}

  Frequency bandwidth() const noexcept { return bw_; }
  double duration_s() const noexcept { return dt_; }
  int polarizations() const noexcept { return pol_; }

 private:
  Frequency bw_;
  double dt_;
  int pol_;
};

struct PhotonsPerMode {
  double value = 0.0;

  PhotonsPerMode() = default;
  explicit PhotonsPerMode(double v) : value(v) {
    detail::require(std::isfinite(v) && v >= 0.0, "photons per mode must be non-negative");
  }
};

struct QuadratureStats {
  double var_x = 0.5;
  double var_p = 0.5;
  double mean_x = 0.0;
  double mean_p = 0.0;
};

/// N = Δν Δt per polarization. Real-valued; large counts are approximations
/// anyway.
inline double mode_count(const ModeWindow& w) {
  return w.bandwidth().hz() * w.duration_s() * w.polarizations();
}

/// Rounds to the given number of significant figures (1e11 for 1.2478e11).
inline double round_significant(double x, int digits = 1) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  const double scale = std::pow(10.0, digits - 1 - std::floor(std::log10(std::fabs(x))));
  return std::round(x * scale) / scale;
}

/// P_min = h ν Δν: one photon per resolution time 1/Δν.
inline OpticalPower quantum_limit_power(Frequency nu, Frequency resolution) {
  return OpticalPower(photon_energy(nu) * resolution.hz());
}

/// <n> = S η / (h ν).
inline PhotonsPerMode photons_per_mode(PowerSpectralDensity s, Frequency nu, double efficiency) {
  detail::require(efficiency >= 0.0 && efficiency <= 1.0, "efficiency must lie in [0, 1]");
  return PhotonsPerMode(s.w_per_hz() * efficiency / photon_energy(nu));
}

/// Shot noise contributes one photon per mode, so SNR is <n>/1.
inline double snr_from_photons_per_mode(PhotonsPerMode n) { return n.value; }

enum class SnrRegime { much_less_than_one, below_one, at_or_above_one };

/// "Much less than one" means at least a decade below.
inline SnrRegime classify_snr(double snr) {
  if (snr >= 1.0) return SnrRegime::at_or_above_one;
  if (snr < 0.1) return SnrRegime::much_less_than_one;
  return SnrRegime::below_one;
}

inline const char* to_string(SnrRegime r) {
  switch (r) {
    case SnrRegime::much_less_than_one: return "much less than one";
    case SnrRegime::below_one: return "below one";
    case SnrRegime::at_or_above_one: return "at or above one";
  }
  return "?";
}

struct VarianceTolerances {
  double asymmetry = 1e-6;      // |var_x - var_p|
  double bias = 1e-6;           // |mean_x|, |mean_p|
  double negative_floor = 1e-6; // largest |n| < 0 that is clamped rather than rejected
};

struct VariancePhotons {
  PhotonsPerMode n;
  bool clamped = false;
};

/// <n> = 2<ΔX²> - 1 for phase-averaged, zero-mean, symmetric quadratures.
inline VariancePhotons photons_from_variance(const QuadratureStats& q,
                                             const VarianceTolerances& tol = {}) {
  detail::require(q.var_x >= 0.0 && q.var_p >= 0.0, "quadrature variances must be non-negative");
  if (std::fabs(q.var_x - q.var_p) > tol.asymmetry)
    throw assumption_violation("quadrature variances are not symmetric");
  if (std::fabs(q.mean_x) > tol.bias || std::fabs(q.mean_p) > tol.bias)
    throw assumption_violation("quadrature means are not zero");
  const double n = 2.0 * q.var_x - 1.0;
  if (n >= 0.0) return {PhotonsPerMode(n), false};
  if (-n <= tol.negative_floor) return {PhotonsPerMode(0.0), true};
  throw assumption_violation("variance below the shot-noise level beyond tolerance");
}

/// Inverse of photons_from_variance: <ΔX²> = (n + 1)/2.
inline QuadratureStats variance_from_photons(PhotonsPerMode n) {
  const double v = 0.5 * (n.value + 1.0);
  return {v, v, 0.0, 0.0};
}

/// Measured variance relative to shot noise, 10 log10(n + 1).
inline double db_above_shot(PhotonsPerMode n) { return 10.0 * std::log10(n.value + 1.0); }

/// Inverse of db_above_shot; negative excess (below the floor) maps to zero.
inline PhotonsPerMode photons_from_db_above_shot(double db) {
  return PhotonsPerMode(std::max(0.0, std::pow(10.0, db / 10.0) - 1.0));
}

/// Re-expresses a dBm-per-bandwidth figure in another bandwidth.
inline double rescale_sensitivity(double dbm, WavelengthSpan from, WavelengthSpan to) {
  detail::require(from.meters() > 0.0 && to.meters() > 0.0, "bandwidths must be positive");
  return dbm + 10.0 * std::log10(to.meters() / from.meters());
}

inline double rescale_sensitivity(double dbm, Frequency from, Frequency to) {
  detail::require(from.hz() > 0.0 && to.hz() > 0.0, "bandwidths must be positive");
  return dbm + 10.0 * std::log10(to.hz() / from.hz());
}

}  // namespace hetspec
