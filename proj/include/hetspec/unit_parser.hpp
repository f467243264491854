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

// Strict suffixed-unit grammar for configuration values and command-line
// flags:
//
//   quantity := ws* number ws? unit ws*
//   number   := [+-]? digits [. digits] [(e|E) [+-]? digits]
//
// Units are matched case-sensitively against a fixed table ("mW" and "MW"
// differ; "M" alone is not a unit). Every dimensioned value needs a unit.

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <variant>

#include "hetspec/errors.hpp"
#include "hetspec/units.hpp"

namespace hetspec {

enum class Dimension {
  length,
  frequency,
  time,
  power,           // W, or dBm (converted)
  ratio_db,        // dB
  attenuation,     // dB/km
  responsivity,    // A/W
  current_noise,   // A/√Hz
  rin,             // dBc/Hz
  resistance,      // Ω
};

inline const char* to_string(Dimension d) {
  switch (d) {
    case Dimension::length: return "length (fm, pm, nm, um, mm, m, km)";
    case Dimension::frequency: return "frequency (Hz, kHz, MHz, GHz, THz)";
    case Dimension::time: return "time (ps, ns, us, ms, s)";
    case Dimension::power: return "power (fW, pW, nW, uW, mW, W, dBm)";
    case Dimension::ratio_db: return "ratio (dB)";
    case Dimension::attenuation: return "attenuation (dB/km)";
    case Dimension::responsivity: return "responsivity (A/W, mA/W)";
    case Dimension::current_noise: return "current noise (A/rtHz, nA/rtHz, pA/rtHz, fA/rtHz)";
    case Dimension::rin: return "relative intensity noise (dBc/Hz)";
    case Dimension::resistance: return "resistance (ohm)";
  }
  return "?";
}

/// A parsed value in SI base units (dB-valued quantities stay in dB, except
/// dBm, which becomes watts).
struct Quantity {
  double value = 0.0;
  Dimension dimension = Dimension::length;
  bool logarithmic = false;  // written in dB-like units
};

namespace detail {

struct UnitEntry {
  std::string_view suffix;
  Dimension dimension;
  double scale;
  bool dbm = false;
  bool logarithmic = false;
};

inline constexpr std::array<UnitEntry, 42> kUnitTable{{
    {"fm", Dimension::length, 1e-15},
    {"pm", Dimension::length, 1e-12},
    {"nm", Dimension::length, 1e-9},
    {"um", Dimension::length, 1e-6},
    {"µm", Dimension::length, 1e-6},
    {"mm", Dimension::length, 1e-3},
    {"m", Dimension::length, 1.0},
    {"km", Dimension::length, 1e3},
    {"Hz", Dimension::frequency, 1.0},
    {"kHz", Dimension::frequency, 1e3},
    {"MHz", Dimension::frequency, 1e6},
    {"GHz", Dimension::frequency, 1e9},
    {"THz", Dimension::frequency, 1e12},
    {"ps", Dimension::time, 1e-12},
    {"ns", Dimension::time, 1e-9},
    {"us", Dimension::time, 1e-6},
    {"µs", Dimension::time, 1e-6},
    {"ms", Dimension::time, 1e-3},
    {"s", Dimension::time, 1.0},
    {"fW", Dimension::power, 1e-15},
    {"pW", Dimension::power, 1e-12},
    {"nW", Dimension::power, 1e-9},
    {"uW", Dimension::power, 1e-6},
    {"µW", Dimension::power, 1e-6},
    {"mW", Dimension::power, 1e-3},
    {"W", Dimension::power, 1.0},
    {"dBm", Dimension::power, 1.0, true, true},
    {"dB", Dimension::ratio_db, 1.0, false, true},
    {"dB/km", Dimension::attenuation, 1.0, false, true},
    {"A/W", Dimension::responsivity, 1.0},
    {"mA/W", Dimension::responsivity, 1e-3},
    {"A/rtHz", Dimension::current_noise, 1.0},
    {"nA/rtHz", Dimension::current_noise, 1e-9},
    {"pA/rtHz", Dimension::current_noise, 1e-12},
    {"fA/rtHz", Dimension::current_noise, 1e-15},
    {"A/√Hz", Dimension::current_noise, 1.0},
    {"nA/√Hz", Dimension::current_noise, 1e-9},
    {"pA/√Hz", Dimension::current_noise, 1e-12},
    {"dBc/Hz", Dimension::rin, 1.0, false, true},
    {"ohm", Dimension::resistance, 1.0},
    {"Ω", Dimension::resistance, 1.0},
    {"kohm", Dimension::resistance, 1e3},
}};

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

/// Length of the leading number token, or 0 if none.
inline std::size_t number_length(std::string_view s) {
  std::size_t i = 0;
  auto digits = [&] {
    const std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    return i - start;
  };
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t mant = digits();
  if (i < s.size() && s[i] == '.') {
    ++i;
    mant += digits();
  }
  if (mant == 0) return 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    std::size_t j = i + 1;
    if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
    const std::size_t save = i;
    i = j;
    if (digits() == 0) i = save;  // "5e" is a number followed by the unit "e..."
  }
  return i;
}

[[noreturn]] inline void bad_quantity(std::string_view text, const std::string& why) {
  throw config_error("cannot parse '" + std::string(text) + "': " + why, "");
}

}  // namespace detail

/// Parses "<number><unit>" into SI. Throws config_error on any malformed
/// input, including a missing or unknown unit.
inline Quantity parse_quantity(std::string_view text) {
  const auto s = detail::trim(text);
  const std::size_t n = detail::number_length(s);
  if (n == 0) detail::bad_quantity(text, "expected a number followed by a unit");
  std::string_view num = s.substr(0, n);
  if (num.front() == '+') num.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
  if (ec != std::errc() || ptr != num.data() + num.size() || !std::isfinite(v))
    detail::bad_quantity(text, "number out of range");
  std::string_view unit = s.substr(n);
  if (!unit.empty() && unit.front() == ' ') unit.remove_prefix(1);
  if (unit.empty()) detail::bad_quantity(text, "missing unit");
  for (const auto& u : detail::kUnitTable) {
    if (u.suffix != unit) continue;
    Quantity q;
    q.dimension = u.dimension;
    q.logarithmic = u.logarithmic;
    q.value = u.dbm ? dbm_to_watts(v) : v * u.scale;
    return q;
  }
  detail::bad_quantity(text, "unknown unit '" + std::string(unit) + "'");
}

/// Parses and checks the dimension.
inline double parse_as(std::string_view text, Dimension want) {
  const Quantity q = parse_quantity(text);
  if (q.dimension != want)
    detail::bad_quantity(text, std::string("expected ") + to_string(want));
  return q.value;
}

inline Wavelength parse_wavelength(std::string_view text) {
  const double v = parse_as(text, Dimension::length);
  if (!(v > 0.0)) detail::bad_quantity(text, "wavelength must be positive");
  return Wavelength(v);
}

inline WavelengthSpan parse_wavelength_span(std::string_view text) {
  const double v = parse_as(text, Dimension::length);
  if (v < 0.0) detail::bad_quantity(text, "span must be non-negative");
  return WavelengthSpan(v);
}

/// Non-negative frequency or bandwidth.
inline Frequency parse_frequency(std::string_view text) {
  const double v = parse_as(text, Dimension::frequency);
  if (v < 0.0) detail::bad_quantity(text, "frequency must be non-negative");
  return Frequency(v);
}

/// Signed frequency offset (detunings).
inline double parse_frequency_offset(std::string_view text) {
  return parse_as(text, Dimension::frequency);
}

inline double parse_duration(std::string_view text) {
  const double v = parse_as(text, Dimension::time);
  if (v < 0.0) detail::bad_quantity(text, "time must be non-negative");
  return v;
}

inline OpticalPower parse_power(std::string_view text) {
  const double v = parse_as(text, Dimension::power);
  if (v < 0.0) detail::bad_quantity(text, "power must be non-negative");
  return OpticalPower(v);
}

/// Power written in dBm; returns the dBm figure itself.
inline double parse_dbm(std::string_view text) {
  const Quantity q = parse_quantity(text);
  if (q.dimension != Dimension::power || !q.logarithmic)
    detail::bad_quantity(text, "expected a level in dBm");
  return watts_to_dbm(q.value);
}

/// A bandwidth may be written in frequency or in wavelength.
using Bandwidth = std::variant<Frequency, WavelengthSpan>;

inline Bandwidth parse_bandwidth(std::string_view text) {
  const Quantity q = parse_quantity(text);
  if (q.value < 0.0) detail::bad_quantity(text, "bandwidth must be non-negative");
  if (q.dimension == Dimension::frequency) return Frequency(q.value);
  if (q.dimension == Dimension::length) return WavelengthSpan(q.value);
  detail::bad_quantity(text, "expected a bandwidth in Hz or in a length unit");
}

inline Frequency bandwidth_hz(const Bandwidth& b, Wavelength center) {
  if (const auto* f = std::get_if<Frequency>(&b)) return *f;
  return bandwidth_freq_from_wl(std::get<WavelengthSpan>(b), center);
}

inline WavelengthSpan bandwidth_wl(const Bandwidth& b, Wavelength center) {
  if (const auto* w = std::get_if<WavelengthSpan>(&b)) return *w;
  return bandwidth_wl_from_freq(std::get<Frequency>(b), center);
}

/// "<level>dBm/<bandwidth>" or "<value>W/Hz" into W/Hz at `center`.
inline double parse_psd(std::string_view text, Wavelength center) {
  const auto s = detail::trim(text);
  if (s.size() > 4 && s.substr(s.size() - 4) == "W/Hz") {
    const auto head = s.substr(0, s.size() - 4);
    const Quantity q = parse_quantity(std::string(head) + "W");
    if (q.logarithmic) detail::bad_quantity(text, "use <level>dBm/<bandwidth> for dB levels");
    if (q.value < 0.0) detail::bad_quantity(text, "PSD must be non-negative");
    return q.value;
  }
  const auto slash = s.find("dBm/");
  if (slash == std::string_view::npos)
    detail::bad_quantity(text, "expected <level>dBm/<bandwidth> or <value>W/Hz");
  const double dbm = parse_dbm(s.substr(0, slash + 3));
  const Bandwidth bw = parse_bandwidth(s.substr(slash + 4));
  const double hz = bandwidth_hz(bw, center).hz();
  if (!(hz > 0.0)) detail::bad_quantity(text, "reference bandwidth must be positive");
  return dbm_to_watts(dbm) / hz;
}

}  // namespace hetspec
