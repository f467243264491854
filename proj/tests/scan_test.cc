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

#include "hetspec/scan.hpp"

#include <cmath>
#include <numeric>

#include "gtest/gtest.h"

using namespace hetspec;

namespace {

const double kNu = kSpeedOfLight / 1550e-9;
const double kHnu = kPlanck * kNu;

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

ScanPlan base_plan(double start_nm, double stop_nm, double step_pm) {
  ScanPlan p;
  p.start = Wavelength::from_nm(start_nm);
  p.stop = Wavelength::from_nm(stop_nm);
  p.step = WavelengthSpan::from_pm(step_pm);
  p.lo.power_w = 1e-3;
  p.lo.linewidth_hz = 100e3;
  p.detector.lowpass_corner_hz = 12e6;
  p.esa.center_hz = 6e6;
  p.esa.rbw_hz = 1e6;
  p.esa.dwell_s = 200e-6;
  p.sample_rate = 32e6;
  return p;
}

/// 1-nm top-hat band at 1550 nm, `n` photons per mode.
AseSpec top_hat(double n) {
  const double lo = kSpeedOfLight / 1550.5e-9, hi = kSpeedOfLight / 1549.5e-9;
  return AseSpec::top_hat_band(lo, hi, n * kHnu, 100e6);
}

}  // namespace

TEST(SpectrumGrid, InclusiveEnds) {
  const auto g = Spectrum::grid(Wavelength::from_nm(1549), Wavelength::from_nm(1551),
                                WavelengthSpan::from_pm(1));
  ASSERT_EQ(g.size(), 2001u);
  EXPECT_NEAR(g.back(), 1551e-9, 1e-18);
}

TEST(SpectrumGrid, LineKeepsItsPower) {
  const auto g = Spectrum::grid(Wavelength::from_nm(1549), Wavelength::from_nm(1551),
                                WavelengthSpan::from_pm(1));
  const auto s = Spectrum::from_line(Wavelength::from_nm(1550.0004), 1e-6, g);
  double p = 0;
  for (std::size_t i = 0; i < g.size(); ++i)
    p += s.psd_w_per_hz[i] * kSpeedOfLight * s.bin_width_m(i) / (g[i] * g[i]);
  EXPECT_NEAR(p, 1e-6, 1e-15);
  EXPECT_GT(s.psd_w_per_hz[1000], 0.0);
}

TEST(ScanPlanValidation, Errors) {
  auto p = base_plan(1550, 1549, 1);
  EXPECT_THROW(p.validate(), config_error);
  p = base_plan(1549, 1550, 1);
  p.esa.center_hz = 15e6;
  EXPECT_THROW(p.validate(), config_error);
  p = base_plan(1549, 1550, 1);
  p.lo.power_w = 0;
  EXPECT_THROW(p.validate(), config_error);
}

TEST(Scan, LoOnlyFloorIsOnePhotonPerMode) {
  const auto p = base_plan(1549.99, 1550.01, 0.5);
  const auto r = run_scan(p, std::monostate{}, 3);
  std::vector<double> n;
  for (double s : r.psd_w_per_hz) n.push_back(s / kHnu);
  EXPECT_NEAR(mean(n), 1.0, 0.05);
  EXPECT_NEAR(scan_floor_photons(r, 1.0), 1.0, 0.25);
}

TEST(Scan, FloorWithEfficiencyStillReadsOnePhoton) {
  auto p = base_plan(1549.99, 1550.01, 0.5);
  p.detector.efficiency = 0.5;
  const auto r = run_scan(p, std::monostate{}, 4);
  std::vector<double> n;
  for (double s : r.psd_w_per_hz) n.push_back(s * 0.5 / kHnu);
  EXPECT_NEAR(mean(n), 1.0, 0.05);
}

TEST(Scan, TopHatEdgesAreStepLimited) {
  auto p = base_plan(1549.4, 1550.6, 1.0);
  const auto r = run_scan(p, AseSpec(top_hat(100.0)), 11);
  const auto e = edge_widths_10_90(r);
  EXPECT_LE(e.rising_m, 2e-12);
  EXPECT_LE(e.falling_m, 2e-12);
  // LO inside the band: both sidebands land at the IF, so the plateau reads
  // n(ν+f) + n(ν-f) + 1 = 2n + 1
  const double mid = r.psd_w_per_hz[r.psd_w_per_hz.size() / 2] / kHnu;
  EXPECT_NEAR(mid, 201.0, 20.0);
  EXPECT_FALSE(r.warnings.empty());
}

TEST(Scan, GratingEdgesAreResolutionLimited) {
  const auto g = Spectrum::grid(Wavelength::from_nm(1549.4), Wavelength::from_nm(1550.6),
                                WavelengthSpan::from_pm(0.1));
  const auto truth = Spectrum::from_ase(top_hat(100.0), g);
  // Gaussian of FWHM R: 10-90 % width 2·1.2816·R/2.3548 = 1.0885 R
  const auto dense = grating_osa_emulate(truth, WavelengthSpan::from_pm(20), -90.0, 200);
  const auto e = edge_widths_10_90(dense);
  EXPECT_NEAR(e.rising_m, 21.77e-12, 0.1e-12);
  EXPECT_NEAR(e.falling_m, 21.77e-12, 0.1e-12);
  // default output grid is R/4
  const auto o = grating_osa_emulate(truth, WavelengthSpan::from_pm(20), -90.0);
  EXPECT_NEAR(o.wavelength_m[1] - o.wavelength_m[0], 5e-12, 1e-18);
  const auto eo = edge_widths_10_90(o);
  EXPECT_GE(eo.rising_m, 20e-12);
  EXPECT_GE(eo.falling_m, 20e-12);
}

TEST(Grating, FlatPsdReadsPsdTimesResolution) {
  const auto g = Spectrum::grid(Wavelength::from_nm(1549), Wavelength::from_nm(1551),
                                WavelengthSpan::from_pm(0.5));
  Spectrum flat{g, std::vector<double>(g.size(), 1e-18)};
  const auto o = grating_osa_emulate(flat, WavelengthSpan::from_pm(20), -200.0);
  const std::size_t mid = o.power_dbm.size() / 2;
  const double res_hz = kSpeedOfLight * 20e-12 / (o.wavelength_m[mid] * o.wavelength_m[mid]);
  EXPECT_NEAR(o.power_dbm[mid], watts_to_dbm(1e-18 * res_hz), 0.01);
}

TEST(Grating, FloorAppliesWithoutInput) {
  const auto g = Spectrum::grid(Wavelength::from_nm(1549), Wavelength::from_nm(1551),
                                WavelengthSpan::from_pm(1));
  Spectrum dark{g, std::vector<double>(g.size(), 0.0)};
  const auto o = grating_osa_emulate(dark, WavelengthSpan::from_pm(20), -90.0);
  for (double d : o.power_dbm) EXPECT_NEAR(d, -90.0, 1e-9);
}

TEST(Grating, NarrowLineIsBroadenedToResolution) {
  const auto g = Spectrum::grid(Wavelength::from_nm(1549.8), Wavelength::from_nm(1550.2),
                                WavelengthSpan::from_pm(0.1));
  const auto s = Spectrum::from_line(Wavelength::from_nm(1550), 1e-6, g);
  const auto o = grating_osa_emulate(s, WavelengthSpan::from_pm(20), -200.0);
  EXPECT_NEAR(fwhm(o), 20e-12, 1e-12);
  EXPECT_NEAR(*std::max_element(o.power_dbm.begin(), o.power_dbm.end()), -30.0, 0.3);
}

TEST(Scan, NarrowLineFwhmIsSumOfLinewidths) {
  // Lorentzian LO and signal: the beat has FWHM Γ_s + Γ_lo.
  const double g_lo = 20e6, g_s = 30e6;
  const double dl = 1550e-9 * 1550e-9 / kSpeedOfLight;  // m per Hz
  ScanPlan p;
  p.start = Wavelength(1550e-9 - 150e6 * dl);
  p.stop = Wavelength(1550e-9 + 150e6 * dl);
  p.step = WavelengthSpan(2.5e6 * dl);
  p.lo.power_w = 1e-3;
  p.lo.linewidth_hz = g_lo;
  p.esa.center_hz = 6e6;
  p.esa.rbw_hz = 1e6;
  p.esa.dwell_s = 200e-6;
  p.sample_rate = 400e6;
  LaserLine line;
  line.center = Wavelength(1550e-9);
  line.laser.power_w = 1e-6;
  line.laser.linewidth_hz = g_s;
  const auto r = run_scan(p, line, 21);
  const double w_hz = fwhm(r) / dl;
  EXPECT_NEAR(w_hz, g_lo + g_s, 0.2 * (g_lo + g_s));
}

TEST(Scan, LinearInInputLevel) {
  const auto p = base_plan(1549.9, 1550.1, 10);
  const auto a = run_scan(p, AseSpec(top_hat(100.0)), 8);
  const auto b = run_scan(p, AseSpec(top_hat(1000.0)), 8);
  const auto f = run_scan(p, std::monostate{}, 8);
  for (std::size_t i = 0; i < a.psd_w_per_hz.size(); ++i) {
    const double shift =
        to_db((b.psd_w_per_hz[i] - f.psd_w_per_hz[i]) / (a.psd_w_per_hz[i] - f.psd_w_per_hz[i]));
    EXPECT_NEAR(shift, 10.0, 0.5);
  }
}

TEST(Scan, WarnsWhenStepFinerThanLinewidth) {
  auto p = base_plan(1550, 1550.001, 0.5);
  p.lo.linewidth_hz = 200e6;
  p.sample_rate = 32e6;
  const auto r = run_scan(p, std::monostate{}, 1);
  ASSERT_FALSE(r.warnings.empty());
  EXPECT_NE(r.warnings[0].find("linewidth"), std::string::npos);
}

TEST(Scan, ResolutionIsLinewidthOrTwoRbw) {
  auto p = base_plan(1549, 1551, 1);
  EXPECT_DOUBLE_EQ(scan_resolution_hz(p), 2e6);
  p.lo.linewidth_hz = 5e6;
  EXPECT_DOUBLE_EQ(scan_resolution_hz(p), 5e6);
}

TEST(Scan, DeterministicAcrossWorkerCounts) {
  const auto p = base_plan(1549.995, 1550.005, 0.5);
  const auto r1 = run_scan(p, AseSpec(top_hat(3.0)), 17, 1);
  const auto r4 = run_scan(p, AseSpec(top_hat(3.0)), 17, 4);
  const auto r8 = run_scan(p, AseSpec(top_hat(3.0)), 17, 8);
  EXPECT_EQ(r1.psd_w_per_hz, r4.psd_w_per_hz);
  EXPECT_EQ(r1.psd_w_per_hz, r8.psd_w_per_hz);
}

TEST(EdgeMetrics, IdealStep) {
  OpticalSpectrumResult r;
  for (int i = 0; i < 100; ++i) {
    r.wavelength_m.push_back(i * 1e-12);
    r.psd_w_per_hz.push_back(i >= 30 && i < 70 ? 1.0 : 0.0);
  }
  const auto e = edge_widths_10_90(r);
  EXPECT_NEAR(e.rising_m, 0.8e-12, 1e-18);
  EXPECT_NEAR(e.falling_m, 0.8e-12, 1e-18);
}

TEST(EdgeMetrics, FwhmOfTriangle) {
  OpticalSpectrumResult r;
  for (int i = 0; i <= 100; ++i) {
    r.wavelength_m.push_back(i * 1e-12);
    r.psd_w_per_hz.push_back(std::max(0.0, 20.0 - std::abs(i - 50)));
  }
  EXPECT_NEAR(fwhm(r), 20e-12, 1e-18);
}

namespace {

OpticalSpectrumResult flat_scan() {
  OpticalSpectrumResult r;
  r.instrument = "heterodyne";
  r.resolution = bandwidth_wl_from_freq(Frequency(2e6), Wavelength::from_nm(1550));
  for (int i = 0; i < 50; ++i) {
    r.wavelength_m.push_back(1550e-9 + i * 1e-13);
    r.psd_w_per_hz.push_back(kHnu);
  }
  return r;
}

OpticalSpectrumResult osa_floor(double dbm) {
  OpticalSpectrumResult r;
  r.instrument = "grating-osa";
  r.resolution = WavelengthSpan::from_pm(20);
  r.noise_floor_dbm = dbm;
  return r;
}

}  // namespace

TEST(Compare, NarrowLaserFavoursHeterodyneOverOsa) {
  ComparisonScenario sc;
  sc.signal_bandwidth_hz = 100e3;
  sc.signal_power_w = dbm_to_watts(-89.0);
  const auto snspd =
      DetectorNoiseModel::snspd_filtered(100.0, WavelengthSpan::from_pm(20), sc.center);
  const auto rep = compare_sensitivity(flat_scan(), osa_floor(-90.0), snspd, sc);
  ASSERT_EQ(rep.rows.size(), 3u);
  EXPECT_TRUE(rep.rows[0].detectable);
  EXPECT_TRUE(rep.rows[1].detectable);
  EXPECT_NEAR(rep.rows[1].margin_db, 1.0, 1e-9);
  // photons/mode seen by the scan: (P/B)/(2 MHz/B)/hν
  EXPECT_NEAR(to_db(dbm_to_watts(-89.0) / 2e6 / kHnu), rep.rows[0].margin_db, 1e-4);
  EXPECT_LT(rep.rows[0].min_detectable_psd_w_per_hz, rep.rows[1].min_detectable_psd_w_per_hz);
}

TEST(Compare, BroadbandFavoursCountingDetectors) {
  // 1-nm ASE at -90 dBm per 20 pm: 3e-3 photons/mode.
  ComparisonScenario sc;
  sc.signal_bandwidth_hz = bandwidth_freq_from_wl(WavelengthSpan::from_nm(1), sc.center).hz();
  sc.signal_power_w = dbm_to_watts(-90.0) * 50.0;
  const auto snspd =
      DetectorNoiseModel::snspd_filtered(100.0, WavelengthSpan::from_pm(20), sc.center);
  const auto rep = compare_sensitivity(flat_scan(), osa_floor(-90.0), snspd, sc);
  EXPECT_FALSE(rep.rows[0].detectable);
  EXPECT_TRUE(rep.rows[1].detectable);
  EXPECT_TRUE(rep.rows[2].detectable);
  EXPECT_EQ(rep.most_sensitive, "snspd-filtered");
  EXPECT_EQ(rep.winner, "snspd-filtered");
}

TEST(Compare, ZeroSignalDetectedByNone) {
  ComparisonScenario sc;
  sc.signal_bandwidth_hz = 1e9;
  const auto snspd =
      DetectorNoiseModel::snspd_filtered(100.0, WavelengthSpan::from_pm(20), sc.center);
  const auto rep = compare_sensitivity(flat_scan(), osa_floor(-90.0), snspd, sc);
  for (const auto& r : rep.rows) EXPECT_FALSE(r.detectable);
  EXPECT_EQ(rep.winner, "none");
}
