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

// Time-domain Monte-Carlo model of a fiber heterodyne spectrometer: LO and
// input fields as complex baseband envelopes, a 50/50 coupler, a balanced
// receiver with shot and electronics noise, and a swept spectrum analyzer.
//
// Conventions
//   * Field samples are in √W; |E|² is instantaneous optical power.
//   * Baseband frequency f maps to optical frequency reference_hz + f.
//   * Photocurrent PSDs are one-sided (A²/Hz); the ESA reports power into a
//     resistive load (50 Ω unless configured).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "hetspec/errors.hpp"
#include "hetspec/fft.hpp"
#include "hetspec/modes.hpp"
#include "hetspec/parallel.hpp"
#include "hetspec/rng.hpp"
#include "hetspec/units.hpp"

namespace hetspec {

/// Sampling frame shared by all traces of one simulation.
struct OpticalWindow {
  double reference_hz = kSpeedOfLight / 1550e-9;  // optical frequency at baseband 0
  double sample_rate = 64e6;
  double duration_s = 120e-6;

  std::size_t samples() const {
    return static_cast<std::size_t>(std::llround(duration_s * sample_rate));
  }
};

struct SimulationLimits {
  std::size_t max_samples = std::size_t{1} << 25;
};

struct FieldTrace {
  cvec samples;
  double sample_rate = 0.0;
  double center_offset_hz = 0.0;  // window reference relative to the optical reference
  std::vector<std::string> warnings;

  double duration() const { return static_cast<double>(samples.size()) / sample_rate; }

  double mean_power() const {
    if (samples.empty()) return 0.0;
    double acc = 0.0;
    for (const auto& s : samples) acc += std::norm(s);
    return acc / static_cast<double>(samples.size());
  }

  static FieldTrace dark(const OpticalWindow& w) {
    return FieldTrace{cvec(w.samples()), w.sample_rate, 0.0, {}};
  }
};

enum class DitherWaveform { sine, triangle };

struct LaserSpec {
  double power_w = 1e-3;
  double detuning_hz = 0.0;  // from the window reference
  double linewidth_hz = 0.0; // Lorentzian FWHM
  double dither_span_hz = 0.0;  // peak-to-peak
  double dither_rate_hz = 0.0;
  DitherWaveform dither_waveform = DitherWaveform::sine;
  double rin_dbc_per_hz = -std::numeric_limits<double>::infinity();

  void validate() const {
    detail::require(power_w >= 0.0 && linewidth_hz >= 0.0 && dither_span_hz >= 0.0 &&
                        dither_rate_hz >= 0.0,
                    "laser parameters must be non-negative");
    detail::require(rin_dbc_per_hz <= 0.0, "RIN must be at most 0 dBc/Hz");
  }

  /// Time-averaged lineshape: Lorentzian, ignoring dither.
  double psd_at_offset(double f_hz) const {
    if (linewidth_hz <= 0.0) return 0.0;
    const double half = 0.5 * linewidth_hz;
    const double d = f_hz - detuning_hz;
    return power_w * (half / kPi) / (d * d + half * half);
  }
};

namespace detail {

inline void check_budget(const OpticalWindow& w, const SimulationLimits& limits) {
  if (!(w.sample_rate > 0.0) || !(w.duration_s > 0.0))
    throw config_error("sample rate and duration must be positive");
  if (w.samples() == 0) throw config_error("trace would contain no samples");
  if (w.samples() > limits.max_samples)
    throw config_error("trace of " + std::to_string(w.samples()) +
                       " samples exceeds the memory budget of " +
                       std::to_string(limits.max_samples));
}

inline double triangle_unit(double cycles) {
  // +1 at integer cycles, -1 at half cycles.
  const double frac = cycles - std::floor(cycles);
  return frac < 0.5 ? 1.0 - 4.0 * frac : -3.0 + 4.0 * frac;
}

}  // namespace detail

/// √P exp(iφ(t)) with φ = 2π·detuning·t + Wiener phase noise (increment
/// variance 2π·linewidth·dt, a Lorentzian line of FWHM linewidth) + frequency
/// dither of the given peak-to-peak span and rate, plus optional RIN.
inline FieldTrace synth_laser(const LaserSpec& spec, const OpticalWindow& w, std::uint64_t seed,
                              const SimulationLimits& limits = {}) {
  spec.validate();
  detail::check_budget(w, limits);
  if (std::fabs(spec.detuning_hz) + 0.5 * spec.dither_span_hz > 0.5 * w.sample_rate)
    throw config_error("laser detuning plus half the dither span exceeds Nyquist (" +
                       std::to_string(0.5 * w.sample_rate) + " Hz)");

  const std::size_t n = w.samples();
  const double dt = 1.0 / w.sample_rate;
  auto eng = make_engine(seed);
  std::uniform_real_distribution<double> uni(0.0, 2.0 * kPi);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const double phase0 = uni(eng);
  const double dither_phase0 = uni(eng);
  const double step_sigma = std::sqrt(2.0 * kPi * spec.linewidth_hz * dt);
  const double amp0 = std::sqrt(spec.power_w);
  const bool rin_on = std::isfinite(spec.rin_dbc_per_hz);
  const double rin_sigma = rin_on ? std::sqrt(from_db(spec.rin_dbc_per_hz) * 0.5 * w.sample_rate) : 0.0;
  const double half_span = 0.5 * spec.dither_span_hz;
  const bool dither_on = half_span > 0.0 && spec.dither_rate_hz > 0.0;

  FieldTrace out;
  out.sample_rate = w.sample_rate;
  out.samples.resize(n);
  double wiener = 0.0;
  double tri_phase = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * dt;
    double dither = 0.0;
    if (dither_on) {
      if (spec.dither_waveform == DitherWaveform::sine) {
        // f_inst = Δ cos(2π f_m t + θ)  ⇒  φ = (Δ/f_m) sin(2π f_m t + θ)
        dither = half_span / spec.dither_rate_hz *
                 std::sin(2.0 * kPi * spec.dither_rate_hz * t + dither_phase0);
      } else {
        dither = tri_phase;
        const double cycles = spec.dither_rate_hz * (t + 0.5 * dt) + dither_phase0 / (2.0 * kPi);
        tri_phase += 2.0 * kPi * half_span * detail::triangle_unit(cycles) * dt;
      }
    }
    const double phi = phase0 + 2.0 * kPi * spec.detuning_hz * t + wiener + dither;
    double amp = amp0;
    if (rin_on) amp *= std::sqrt(std::max(0.0, 1.0 + rin_sigma * gauss(eng)));
    out.samples[k] = std::polar(amp, phi);
    if (step_sigma > 0.0) wiener += step_sigma * gauss(eng);
  }
  return out;
}

/// Spectral shape of a broadband (ASE-like) input, in absolute optical
/// frequency.
struct AseSpec {
  enum class Shape { top_hat, table };

  Shape shape = Shape::top_hat;
  // top-hat: flat level between the band edges, Gaussian-CDF edges with the
  // given 10-90 % width.
  Wavelength center = Wavelength::from_nm(1550.0);
  WavelengthSpan width = WavelengthSpan::from_nm(1.0);
  double edge_10_90_hz = 100e6;
  double psd_w_per_hz = 0.0;
  // table: piecewise-linear PSD in W/Hz over ascending optical frequency.
  std::vector<double> table_hz;
  std::vector<double> table_psd;

  static AseSpec top_hat_band(double low_hz, double high_hz, double psd_w_per_hz,
                              double edge_10_90_hz) {
    detail::require(high_hz > low_hz && low_hz > 0.0, "band edges must be ordered and positive");
    AseSpec a;
    const double mid = 0.5 * (low_hz + high_hz);
    a.center = frequency_to_wavelength(Frequency(mid));
    a.width = bandwidth_wl_from_freq(Frequency(high_hz - low_hz), a.center);
    a.edge_10_90_hz = edge_10_90_hz;
    a.psd_w_per_hz = psd_w_per_hz;
    return a;
  }

  void validate() const {
    if (shape == Shape::top_hat) {
      detail::require(psd_w_per_hz >= 0.0 && edge_10_90_hz >= 0.0,
                      "ASE level and edge width must be non-negative");
      return;
    }
    detail::require(table_hz.size() == table_psd.size() && table_hz.size() >= 2,
                    "ASE table needs at least two matching points");
    for (std::size_t i = 0; i < table_hz.size(); ++i) {
      detail::require(table_psd[i] >= 0.0, "ASE table PSD must be non-negative");
      if (i > 0) detail::require(table_hz[i] > table_hz[i - 1], "ASE table must be ascending");
    }
  }

  double low_edge_hz() const {
    if (shape == Shape::table) return table_hz.front();
    const double nu = wavelength_to_frequency(center).hz();
    return nu - 0.5 * bandwidth_freq_from_wl(width, center).hz();
  }
  double high_edge_hz() const {
    if (shape == Shape::table) return table_hz.back();
    const double nu = wavelength_to_frequency(center).hz();
    return nu + 0.5 * bandwidth_freq_from_wl(width, center).hz();
  }

  /// Frequency range outside which the PSD is negligible.
  std::pair<double, double> support_hz() const {
    const double pad = shape == Shape::top_hat ? 3.0 * edge_sigma() : 0.0;
    return {low_edge_hz() - pad, high_edge_hz() + pad};
  }

  double psd_at(double optical_hz) const {
    if (shape == Shape::table) {
      if (optical_hz <= table_hz.front() || optical_hz >= table_hz.back()) return 0.0;
      auto it = std::upper_bound(table_hz.begin(), table_hz.end(), optical_hz);
      const auto i = static_cast<std::size_t>(it - table_hz.begin());
      const double t = (optical_hz - table_hz[i - 1]) / (table_hz[i] - table_hz[i - 1]);
      return table_psd[i - 1] + t * (table_psd[i] - table_psd[i - 1]);
    }
    const double lo = low_edge_hz();
    const double hi = high_edge_hz();
    const double sigma = edge_sigma();
    if (sigma <= 0.0) return (optical_hz >= lo && optical_hz <= hi) ? psd_w_per_hz : 0.0;
    auto phi = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
    return psd_w_per_hz * (phi((optical_hz - lo) / sigma) - phi((optical_hz - hi) / sigma));
  }

 private:
  // 10-90 % of a Gaussian CDF spans 2·1.2815516σ.
  double edge_sigma() const { return edge_10_90_hz / (2.0 * 1.2815515655446004); }
};

/// Circular complex Gaussian noise with the band's PSD over the window. With
/// `allow_truncation`, a band wider than the window is cut at the window
/// edges and a warning is attached; otherwise that is a configuration error.
inline FieldTrace synth_ase(const AseSpec& spec, const OpticalWindow& w, std::uint64_t seed,
                            bool allow_truncation = false, const SimulationLimits& limits = {}) {
  spec.validate();
  detail::check_budget(w, limits);
  const std::size_t n = w.samples();
  FieldTrace out;
  out.sample_rate = w.sample_rate;
  out.samples.assign(n, {});

  const auto [lo, hi] = spec.support_hz();
  const double win_lo = w.reference_hz - 0.5 * w.sample_rate;
  const double win_hi = w.reference_hz + 0.5 * w.sample_rate;
  const bool overlaps = hi > win_lo && lo < win_hi;
  if (overlaps && (lo < win_lo || hi > win_hi)) {
    if (!allow_truncation)
      throw config_error("ASE band extends beyond the simulated bandwidth (Nyquist)");
    out.warnings.emplace_back("ASE band truncated to the simulation window");
  }
  if (!overlaps) return out;

  const double df = w.sample_rate / static_cast<double>(n);
  auto eng = make_engine(seed);
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  for (std::size_t k = 0; k < n; ++k) {
    const double s = spec.psd_at(w.reference_hz + bin_frequency(k, n, w.sample_rate));
    const double re = gauss(eng);
    const double im = gauss(eng);
    out.samples[k] = std::sqrt(s * df) * std::complex<double>(re, im);
  }
  fft_inverse(out.samples);
  return out;
}

/// Ideal lossless 50/50 coupler: ((s+l)/√2, (s−l)/√2).
inline std::pair<FieldTrace, FieldTrace> mix_50_50(const FieldTrace& signal, const FieldTrace& lo) {
  if (signal.samples.size() != lo.samples.size() || signal.sample_rate != lo.sample_rate)
    throw config_error("signal and LO traces must share sample rate and length");
  const double r = 1.0 / std::sqrt(2.0);
  FieldTrace a{cvec(signal.samples.size()), signal.sample_rate, signal.center_offset_hz, {}};
  FieldTrace b{cvec(signal.samples.size()), signal.sample_rate, signal.center_offset_hz, {}};
  for (std::size_t k = 0; k < signal.samples.size(); ++k) {
    a.samples[k] = r * (signal.samples[k] + lo.samples[k]);
    b.samples[k] = r * (signal.samples[k] - lo.samples[k]);
  }
  return {std::move(a), std::move(b)};
}

struct DetectorSpec {
  double efficiency = 1.0;
  double responsivity = 0.0;  // A/W at unit efficiency; 0 selects q/(hν)
  std::vector<double> gain_stages{1e4};  // first stage V/A, then V/V
  double lowpass_corner_hz = 0.0;        // 0: no output filter
  double electronics_noise = 0.0;        // input-referred, A/√Hz
  double detection_bandwidth_hz = 0.0;   // used as the corner if none is given

  void validate() const {
    detail::require(efficiency >= 0.0 && efficiency <= 1.0, "efficiency must lie in [0, 1]");
    detail::require(responsivity >= 0.0 && electronics_noise >= 0.0 &&
                        lowpass_corner_hz >= 0.0 && detection_bandwidth_hz >= 0.0,
                    "detector parameters must be non-negative");
    detail::require(!gain_stages.empty(), "at least one gain stage is required");
    for (double g : gain_stages) detail::require(g > 0.0, "gains must be positive");
  }

  double responsivity_at(double optical_hz) const {
    return responsivity > 0.0 ? responsivity : kElementaryCharge / (kPlanck * optical_hz);
  }
  double transimpedance() const {
    return std::accumulate(gain_stages.begin(), gain_stages.end(), 1.0, std::multiplies<>());
  }
  double corner_hz() const {
    return lowpass_corner_hz > 0.0 ? lowpass_corner_hz : detection_bandwidth_hz;
  }

  /// |H(f)|² of the discrete single-pole output filter at sample rate fs.
  double lowpass_gain_sq(double f_hz, double fs) const {
    const double fc = corner_hz();
    if (fc <= 0.0) return 1.0;
    const double a = 1.0 - std::exp(-2.0 * kPi * fc / fs);
    const double b = 1.0 - a;
    return a * a / (1.0 - 2.0 * b * std::cos(2.0 * kPi * f_hz / fs) + b * b);
  }
  /// Voltage²/current² transfer at f.
  double chain_gain_sq(double f_hz, double fs) const {
    const double g = transimpedance();
    return g * g * lowpass_gain_sq(f_hz, fs);
  }

  /// One-sided shot-noise current PSD for total detected optical power.
  double shot_current_psd(double total_power_w, double optical_hz) const {
    return 2.0 * kElementaryCharge * responsivity_at(optical_hz) * efficiency * total_power_w;
  }
  double electronics_current_psd() const { return electronics_noise * electronics_noise; }
};

/// Input-referred current noise density that puts the LO-only floor
/// (shot + electronics) `clearance_db` above the electronics-only floor.
inline double electronics_noise_for_floor_clearance(const DetectorSpec& det, double lo_power_w,
                                                    double optical_hz, double clearance_db) {
  detail::require(clearance_db > 0.0, "clearance must be positive");
  const double shot = det.shot_current_psd(lo_power_w, optical_hz);
  return std::sqrt(shot / (from_db(clearance_db) - 1.0));
}

struct DetectorOutput {
  std::vector<double> volts;
  double sample_rate = 0.0;
};

/// Balanced photodetection: R·η·(|a1|² − |a2|²) + Gaussian shot noise of
/// one-sided PSD 2q·R·η·(P1+P2) + white electronics noise, through the gain
/// stages and the single-pole output filter.
inline DetectorOutput balanced_detect(const FieldTrace& arm1, const FieldTrace& arm2,
                                      const DetectorSpec& det, double optical_hz,
                                      std::uint64_t seed) {
  det.validate();
  if (arm1.samples.size() != arm2.samples.size() || arm1.sample_rate != arm2.sample_rate)
    throw config_error("balanced detector arms must share sample rate and length");
  const double fs = arm1.sample_rate;
  const double r_eta = det.responsivity_at(optical_hz) * det.efficiency;
  const double shot_scale = std::sqrt(kElementaryCharge * r_eta * fs);
  const double elec_sigma = det.electronics_noise * std::sqrt(0.5 * fs);
  const double gain = det.transimpedance();
  const double fc = det.corner_hz();
  const double alpha = fc > 0.0 ? 1.0 - std::exp(-2.0 * kPi * fc / fs) : 1.0;

  auto eng = make_engine(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  DetectorOutput out;
  out.sample_rate = fs;
  out.volts.resize(arm1.samples.size());
  double y = 0.0;
  for (std::size_t k = 0; k < arm1.samples.size(); ++k) {
    const double p1 = std::norm(arm1.samples[k]);
    const double p2 = std::norm(arm2.samples[k]);
    double i = r_eta * (p1 - p2);
    i += shot_scale * std::sqrt(p1 + p2) * gauss(eng);
    i += elec_sigma * gauss(eng);
    y += alpha * (gain * i - y);
    out.volts[k] = y;
  }
  return out;
}

enum class EsaDetector { average, sample, peak };

inline const char* to_string(EsaDetector d) {
  switch (d) {
    case EsaDetector::average: return "average";
    case EsaDetector::sample: return "sample";
    case EsaDetector::peak: return "peak";
  }
  return "?";
}

struct EsaSpec {
  double center_hz = 6e6;
  double span_hz = 0.0;  // 0: zero span at the center frequency
  double rbw_hz = 1e6;   // -3 dB width of the Gaussian resolution filter
  double vbw_hz = 0.0;   // 0: video filter off
  std::size_t points = 1;
  double dwell_s = 120e-6;  // per point
  EsaDetector detector = EsaDetector::average;
  double load_ohms = 50.0;

  void validate() const {
    if (!(rbw_hz > 0.0)) throw config_error("RBW must be positive");
    if (span_hz < 0.0 || vbw_hz < 0.0 || center_hz < 0.0)
      throw config_error("ESA frequencies must be non-negative");
    if (span_hz > 0.0 && rbw_hz > span_hz) throw config_error("RBW wider than span");
    if (points == 0) throw config_error("ESA needs at least one sweep point");
    if (!(dwell_s > 0.0)) throw config_error("per-point integration must be positive");
    if (!(load_ohms > 0.0)) throw config_error("load impedance must be positive");
  }

  double sweep_time() const { return static_cast<double>(points) * dwell_s; }

  double point_frequency(std::size_t i) const {
    if (points == 1 || span_hz == 0.0) return center_hz;
    return center_hz - 0.5 * span_hz +
           span_hz * static_cast<double>(i) / static_cast<double>(points - 1);
  }
};

/// Noise bandwidth of the Gaussian resolution filter.
inline double gaussian_enbw(double rbw_hz) {
  return rbw_hz * std::sqrt(kPi / (4.0 * std::log(2.0)));
}

/// Amplitude response of the resolution filter centred on fc.
inline double rbw_amplitude(double f_hz, double fc_hz, double rbw_hz) {
  const double x = (f_hz - fc_hz) / rbw_hz;
  return std::exp(-2.0 * std::log(2.0) * x * x);
}

struct RfSpectrum {
  std::vector<double> frequency_hz;
  std::vector<double> power_w;  // electrical, into the ESA load
  double rbw_hz = 0.0;
  double vbw_hz = 0.0;
  EsaDetector detector = EsaDetector::average;
  std::uint64_t seed = 0;

  std::vector<double> power_dbm() const {
    std::vector<double> out(power_w.size());
    std::transform(power_w.begin(), power_w.end(), out.begin(), watts_to_dbm);
    return out;
  }
};

/// Mean electrical power in the resolution filter at fc over the whole trace
/// (a zero-span measurement with an averaging detector).
inline double band_power(const DetectorOutput& v, double fc_hz, double rbw_hz,
                         double load_ohms = 50.0) {
  const std::size_t n = v.volts.size();
  if (n == 0) return 0.0;
  cvec x(v.volts.begin(), v.volts.end());
  fft_forward(x);
  double acc = 0.0;
  for (std::size_t k = 1; k < (n + 1) / 2; ++k) {
    const double g = rbw_amplitude(bin_frequency(k, n, v.sample_rate), fc_hz, rbw_hz);
    acc += std::norm(x[k]) * g * g;
  }
  const double nn = static_cast<double>(n);
  return 2.0 * acc / (nn * nn) / load_ohms;
}

/// Swept analyzer: for point i the trace slice [i·dwell, (i+1)·dwell) passes
/// the Gaussian RBW filter at the point frequency; the detected power runs
/// through a single-pole video filter that carries state across the sweep,
/// and the point detector (average/sample/peak) reduces each slice.
inline RfSpectrum esa_measure(const DetectorOutput& v, const EsaSpec& esa, std::uint64_t seed = 0,
                              unsigned workers = 1) {
  esa.validate();
  const double fs = v.sample_rate;
  const auto m = static_cast<std::size_t>(std::llround(esa.dwell_s * fs));
  if (m == 0) throw config_error("per-point integration shorter than one sample");
  if (v.volts.size() < m * esa.points)
    throw config_error("trace shorter than the sweep (points x per-point integration)");
  if (esa.center_hz + 0.5 * esa.span_hz + esa.rbw_hz > 0.5 * fs)
    throw config_error("sweep range plus RBW exceeds the detector Nyquist frequency");

  std::vector<double> inst(m * esa.points);
  parallel_for(esa.points, workers, [&](std::size_t i) {
    cvec x(v.volts.begin() + static_cast<std::ptrdiff_t>(i * m),
           v.volts.begin() + static_cast<std::ptrdiff_t>((i + 1) * m));
    fft_forward(x);
    const double fc = esa.point_frequency(i);
    for (std::size_t k = 0; k < m; ++k) {
      const double f = bin_frequency(k, m, fs);
      x[k] *= f > 0.0 ? rbw_amplitude(f, fc, esa.rbw_hz) : 0.0;
    }
    fft_inverse(x);
    const double scale = 2.0 / (static_cast<double>(m) * static_cast<double>(m) * esa.load_ohms);
    for (std::size_t k = 0; k < m; ++k) inst[i * m + k] = std::norm(x[k]) * scale;
  });

  const bool video_on = esa.vbw_hz > 0.0;
  const double alpha = video_on ? 1.0 - std::exp(-2.0 * kPi * esa.vbw_hz / fs) : 1.0;
  double y = std::accumulate(inst.begin(), inst.begin() + static_cast<std::ptrdiff_t>(m), 0.0) /
             static_cast<double>(m);

  RfSpectrum out;
  out.rbw_hz = esa.rbw_hz;
  out.vbw_hz = esa.vbw_hz;
  out.detector = esa.detector;
  out.seed = seed;
  out.frequency_hz.resize(esa.points);
  out.power_w.resize(esa.points);
  for (std::size_t i = 0; i < esa.points; ++i) {
    double sum = 0.0;
    double peak = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      y += alpha * (inst[i * m + k] - y);
      sum += y;
      peak = std::max(peak, y);
    }
    out.frequency_hz[i] = esa.point_frequency(i);
    switch (esa.detector) {
      case EsaDetector::average: out.power_w[i] = sum / static_cast<double>(m); break;
      case EsaDetector::sample: out.power_w[i] = y; break;
      case EsaDetector::peak: out.power_w[i] = peak; break;
    }
  }
  return out;
}

/// One-sided photocurrent PSD that produced an ESA reading at f.
inline double rf_power_to_current_psd(double rf_power_w, const DetectorSpec& det,
                                      const EsaSpec& esa, double f_hz, double fs) {
  return rf_power_w * esa.load_ohms / (det.chain_gain_sq(f_hz, fs) * gaussian_enbw(esa.rbw_hz));
}

/// Expected ESA reading for a one-sided photocurrent PSD that is flat across
/// the RBW.
inline double current_psd_to_rf_power(double current_psd, const DetectorSpec& det,
                                      const EsaSpec& esa, double f_hz, double fs) {
  return current_psd * det.chain_gain_sq(f_hz, fs) * gaussian_enbw(esa.rbw_hz) / esa.load_ohms;
}

using InputSpec = std::variant<std::monostate, AseSpec, LaserSpec>;

inline double input_psd_at(const InputSpec& in, double optical_hz, double reference_hz) {
  if (const auto* a = std::get_if<AseSpec>(&in)) return a->psd_at(optical_hz);
  if (const auto* l = std::get_if<LaserSpec>(&in)) return l->psd_at_offset(optical_hz - reference_hz);
  return 0.0;
}

inline FieldTrace synth_input(const InputSpec& in, const OpticalWindow& w, std::uint64_t seed,
                              bool allow_truncation, const SimulationLimits& limits) {
  if (const auto* a = std::get_if<AseSpec>(&in)) return synth_ase(*a, w, seed, allow_truncation, limits);
  if (const auto* l = std::get_if<LaserSpec>(&in)) return synth_laser(*l, w, seed, limits);
  detail::check_budget(w, limits);
  return FieldTrace::dark(w);
}

/// Full heterodyne configuration for one measurement point.
struct HeterodyneConfig {
  OpticalWindow window;
  LaserSpec lo;
  InputSpec input;
  DetectorSpec detector;
  EsaSpec esa;
  std::size_t trials = 100;
  double clearance_margin_db = 3.0;  // shot floor over electronics floor
  bool allow_truncation = false;
  SimulationLimits limits;
};

/// Runs LO + input through the coupler and receiver.
inline DetectorOutput run_chain(const HeterodyneConfig& cfg, const LaserSpec* lo,
                                const InputSpec& input, std::uint64_t master, std::size_t trial,
                                std::uint64_t salt) {
  const auto& w = cfg.window;
  FieldTrace lo_trace = lo ? synth_laser(*lo, w, derive_seed(master ^ salt, trial, Stream::lo), cfg.limits)
                           : FieldTrace::dark(w);
  FieldTrace sig = synth_input(input, w, derive_seed(master ^ salt, trial, Stream::signal),
                               cfg.allow_truncation, cfg.limits);
  auto [a1, a2] = mix_50_50(sig, lo_trace);
  return balanced_detect(a1, a2, cfg.detector, w.reference_hz,
                         derive_seed(master ^ salt, trial, Stream::detector));
}

struct PhotonMeasurement {
  double signal_power_w = 0.0;    // mean ESA power, LO + input
  double baseline_power_w = 0.0;  // LO only
  double dark_power_w = 0.0;      // no light
  double variance_ratio = 0.0;    // (signal − dark)/(baseline − dark)
  double db_above_shot = 0.0;
  double raw_db_above_floor = 0.0;  // signal/baseline without dark subtraction
  double measured_photons = 0.0;    // variance_ratio − 1
  double predicted_photons = 0.0;   // η·[S(ν_LO+f) + S(ν_LO−f)]/(hν)
  double predicted_signal_band = 0.0;
  double predicted_image_band = 0.0;
  double predicted_db = 0.0;
  double clearance_db = 0.0;           // measured LO floor over dark floor
  double expected_clearance_db = 0.0;  // from the noise densities
  bool shot_noise_limited = true;
  std::size_t trials = 0;
  std::vector<std::string> warnings;
};

namespace detail {
inline constexpr std::uint64_t kSaltDark = 0xD4;
inline constexpr std::uint64_t kSaltBaseline = 0xB5;
inline constexpr std::uint64_t kSaltSignal = 0x51;
}  // namespace detail

/// Three-run estimate of detected photons per mode at the ESA center
/// frequency: dark, LO-only baseline, and LO + input, each averaged over
/// `cfg.trials` independent seeds.
inline PhotonMeasurement measure_photons_per_mode(const HeterodyneConfig& cfg, std::uint64_t seed,
                                                  unsigned workers = 1) {
  cfg.esa.validate();
  cfg.detector.validate();
  if (cfg.trials == 0) throw config_error("at least one trial is required");
  const double fs = cfg.window.sample_rate;
  const double f_if = cfg.esa.center_hz;
  if (f_if + 2.0 * cfg.esa.rbw_hz > 0.5 * fs)
    throw config_error("detection frequency plus RBW margin exceeds Nyquist");

  struct Row {
    double dark, baseline, signal;
  };
  std::vector<Row> rows(cfg.trials);
  const InputSpec none{};
  parallel_for(cfg.trials, workers, [&](std::size_t t) {
    const auto d = run_chain(cfg, nullptr, none, seed, t, detail::kSaltDark);
    const auto b = run_chain(cfg, &cfg.lo, none, seed, t, detail::kSaltBaseline);
    const auto s = run_chain(cfg, &cfg.lo, cfg.input, seed, t, detail::kSaltSignal);
    rows[t] = {band_power(d, f_if, cfg.esa.rbw_hz, cfg.esa.load_ohms),
               band_power(b, f_if, cfg.esa.rbw_hz, cfg.esa.load_ohms),
               band_power(s, f_if, cfg.esa.rbw_hz, cfg.esa.load_ohms)};
  });

  PhotonMeasurement m;
  m.trials = cfg.trials;
  for (const auto& r : rows) {
    m.dark_power_w += r.dark;
    m.baseline_power_w += r.baseline;
    m.signal_power_w += r.signal;
  }
  const double nt = static_cast<double>(cfg.trials);
  m.dark_power_w /= nt;
  m.baseline_power_w /= nt;
  m.signal_power_w /= nt;

  const double shot = m.baseline_power_w - m.dark_power_w;
  if (!(shot > 0.0)) throw assumption_violation("no LO shot noise above the dark floor");
  m.variance_ratio = (m.signal_power_w - m.dark_power_w) / shot;
  m.db_above_shot = to_db(std::max(m.variance_ratio, 0.0));
  m.raw_db_above_floor = to_db(m.signal_power_w / m.baseline_power_w);
  m.measured_photons = m.variance_ratio - 1.0;

  const double nu = cfg.window.reference_hz;
  const double h_nu = kPlanck * nu;
  const double eta = cfg.detector.efficiency;
  const double lo_offset = cfg.lo.detuning_hz;
  m.predicted_signal_band = eta * input_psd_at(cfg.input, nu + lo_offset + f_if, nu) / h_nu;
  m.predicted_image_band = eta * input_psd_at(cfg.input, nu + lo_offset - f_if, nu) / h_nu;
  m.predicted_photons = m.predicted_signal_band + m.predicted_image_band;
  m.predicted_db = db_above_shot(PhotonsPerMode(m.predicted_photons));

  const double shot_psd = cfg.detector.shot_current_psd(cfg.lo.power_w, nu);
  const double elec_psd = cfg.detector.electronics_current_psd();
  m.expected_clearance_db = elec_psd > 0.0 ? to_db((shot_psd + elec_psd) / elec_psd)
                                           : std::numeric_limits<double>::infinity();
  m.clearance_db = m.dark_power_w > 0.0 ? to_db(m.baseline_power_w / m.dark_power_w)
                                        : std::numeric_limits<double>::infinity();
  m.shot_noise_limited = m.clearance_db >= cfg.clearance_margin_db;
  if (!m.shot_noise_limited)
    m.warnings.emplace_back("LO shot-noise floor is less than the configured margin above the "
                            "electronics floor: not shot-noise limited");
  return m;
}

struct SimulationResult {
  RfSpectrum spectrum;  // LO + input
  RfSpectrum floor;     // LO only
  PhotonMeasurement measurement;
};

/// Swept ESA traces of LO + input and of the LO alone, averaged (linear
/// power) over trials, plus the photons-per-mode measurement at the center
/// frequency. Swept traces last the sweep time; the measurement uses the
/// configured window duration.
inline SimulationResult run_simulation(HeterodyneConfig cfg, std::uint64_t seed,
                                       unsigned workers = 1) {
  cfg.esa.validate();
  const HeterodyneConfig point = cfg;
  cfg.window.duration_s = cfg.esa.sweep_time();
  if (cfg.trials == 0) throw config_error("at least one trial is required");

  std::vector<RfSpectrum> sig(cfg.trials), flo(cfg.trials);
  const InputSpec none{};
  parallel_for(cfg.trials, workers, [&](std::size_t t) {
    const auto b = run_chain(cfg, &cfg.lo, none, seed, t, detail::kSaltBaseline);
    const auto s = run_chain(cfg, &cfg.lo, cfg.input, seed, t, detail::kSaltSignal);
    flo[t] = esa_measure(b, cfg.esa, seed);
    sig[t] = esa_measure(s, cfg.esa, seed);
  });

  auto average = [&](const std::vector<RfSpectrum>& v) {
    RfSpectrum out = v.front();
    for (std::size_t t = 1; t < v.size(); ++t)
      for (std::size_t i = 0; i < out.power_w.size(); ++i) out.power_w[i] += v[t].power_w[i];
    for (auto& p : out.power_w) p /= static_cast<double>(v.size());
    return out;
  };
  SimulationResult r;
  r.spectrum = average(sig);
  r.floor = average(flo);
  r.measurement = measure_photons_per_mode(point, seed, workers);
  return r;
}

}  // namespace hetspec
