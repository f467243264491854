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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cli_app.hpp"
#include "hetspec/config.hpp"
#include "hetspec/modes.hpp"
#include "hetspec/report.hpp"
#include "hetspec/scan.hpp"
#include "hetspec/signal_chain.hpp"
#include "hetspec/sources.hpp"
#include "hetspec/units.hpp"

namespace fs = std::filesystem;
using namespace hetspec;

namespace {

const std::string kConfigDir = HETSPEC_CONFIG_DIR;
const Wavelength kWl = Wavelength::from_nm(1550.0);

struct Outcome {
  bool pass = true;
  std::string detail;
};

/// Accumulates sub-checks of one criterion.
class Checks {
 public:
  void near(const std::string& what, double got, double want, double tol) {
    const bool ok = std::isfinite(got) && std::fabs(got - want) <= tol;
    add(ok, format("%s=%.6g (want %.6g +/- %.3g)", what.c_str(), got, want, tol));
  }
  void rel(const std::string& what, double got, double want, double frac) {
    const bool ok = std::isfinite(got) && std::fabs(got - want) <= frac * std::fabs(want);
    add(ok, format("%s=%.6g (want %.6g +/- %.3g%%)", what.c_str(), got, want, 100 * frac));
  }
  void sig(const std::string& what, double got, double want, int digits) {
    const double a = round_significant(got, digits), b = round_significant(want, digits);
    const bool ok = std::isfinite(got) && std::fabs(a - b) <= 1e-9 * std::fabs(b);
    add(ok, format("%s=%.*g (want %.*g)", what.c_str(), digits, got, digits, want));
  }
  void le(const std::string& what, double got, double limit) {
    add(std::isfinite(got) && got <= limit, format("%s=%.4g (<= %.4g)", what.c_str(), got, limit));
  }
  void ge(const std::string& what, double got, double limit) {
    add(std::isfinite(got) && got >= limit, format("%s=%.4g (>= %.4g)", what.c_str(), got, limit));
  }
  void truth(const std::string& what, bool ok) { add(ok, what); }
  Outcome outcome() const { return out_; }

 private:
  void add(bool ok, const std::string& s) {
    out_.pass = out_.pass && ok;
    if (!out_.detail.empty()) out_.detail += "; ";
    out_.detail += ok ? s : "!" + s;
  }
  Outcome out_;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

Outcome photons_per_mode_from_psd() {
  Checks c;
  const double s = parse_psd("-64dBm/20pm", kWl);
  const auto n = photons_per_mode(PowerSpectralDensity(s), wavelength_to_frequency(kWl), 1.0);
  c.near("n", n.value, 1.25, 0.05);
  return c.outcome();
}

Outcome mode_counts() {
  Checks c;
  const double n1 = mode_count(ModeWindow(Frequency(1e3), 1.0));
  c.truth(format("N(1kHz,1s)=%.17g exact", n1), n1 == 1000.0);
  const double n2 = mode_count(ModeWindow(WavelengthSpan::from_nm(1.0), kWl, 1.0));
  c.rel("N(1nm,1s)", n2, 1.249e11, 0.005);
  const double r = round_significant(n2, 1);
  c.truth(format("rounded=%.0e", r), r == 1e11);
  return c.outcome();
}

Outcome source_brightness() {
  Checks c;
  const auto sc = read_sources_scenario(load_json_file(kConfigDir + "/network_sources.json"));
  const SourceRow* spdc = nullptr;
  const SourceRow* raman = nullptr;
  const SourceRow* sfwm = nullptr;
  for (const auto& s : sc.sources) {
    if (s.type == "spdc") spdc = &s;
    if (s.type == "raman") raman = &s;
    if (s.type == "sfwm") sfwm = &s;
  }
  if (!spdc || !raman || !sfwm) return {false, "bundled scenario lacks a source"};
  c.sig("spdc_rounded_N", spdc->photons_per_mode_rounded_n, 3e-3, 1);
  c.sig("spdc_exact", spdc->photons_per_mode, 2.40416321614068e-3, 3);
  c.sig("raman_W_per_nm", raman->w_per_nm, 8e-11, 1);
  c.sig("raman_W_per_nm_exact", raman->w_per_nm, 7.90569415042095e-11, 3);
  c.sig("raman_photons_s_nm", raman->photons_per_s_per_nm, 6e8, 1);
  c.sig("raman_photons_s_nm_exact", raman->photons_per_s_per_nm, 6.16871881458674e8, 3);
  c.sig("raman_rounded_N", raman->photons_per_mode_rounded_n, 6e-3, 1);
  c.sig("raman_exact", raman->photons_per_mode, 4.94353562158146e-3, 3);
  c.sig("sfwm", sfwm->photons_per_mode, 1e-4, 1);
  c.sig("sfwm_exact", sfwm->photons_per_mode, 1e-4, 3);
  return c.outcome();
}

Outcome detector_noise() {
  Checks c;
  c.rel("snspd", snspd_noise_per_mode(100.0, WavelengthSpan::from_pm(20), kWl), 4.0e-8, 0.05);
  c.rel("osa", grating_osa_noise_per_mode(-90.0, WavelengthSpan::from_pm(20), kWl), 3.1e-3, 0.05);
  return c.outcome();
}

Outcome variance_dictionary() {
  Checks c;
  c.near("n(var=1/2)", photons_from_variance({0.5, 0.5, 0.0, 0.0}).n.value, 0.0, 1e-12);
  c.near("n(var=1)", photons_from_variance({1.0, 1.0, 0.0, 0.0}).n.value, 1.0, 1e-12);
  c.near("dB(n=1)", db_above_shot(PhotonsPerMode(1.0)), 3.0103, 5e-5);
  return c.outcome();
}

Outcome sensitivity_rescale() {
  Checks c;
  const auto from = WavelengthSpan::from_pm(0.8e-3);
  const auto to = WavelengthSpan::from_pm(20);
  c.near("-89dBm/0.8fm", rescale_sensitivity(-89.0, from, to), -45.0, 0.1);
  c.near("-109dBm/0.8fm", rescale_sensitivity(-109.0, from, to), -65.0, 0.1);
  return c.outcome();
}

Outcome monte_carlo_three_db() {
  Checks c;
  const auto one = read_simulate_config(load_json_file(kConfigDir + "/simulate_one_photon.json"));
  const auto none = read_simulate_config(load_json_file(kConfigDir + "/simulate_lo_only.json"));
  c.ge("seeds", static_cast<double>(one.trials), 100.0);
  c.near("dB(n=1)", measure_photons_per_mode(one, 2024).db_above_shot, 3.0, 0.3);
  c.near("dB(n=0)", measure_photons_per_mode(none, 2025).db_above_shot, 0.0, 0.2);
  return c.outcome();
}

Outcome detector_floor() {
  Checks c;
  auto lo = read_simulate_config(load_json_file(kConfigDir + "/simulate_lo_only.json"));
  const double p1 = measure_photons_per_mode(lo, 5).baseline_power_w;
  lo.lo.power_w *= 2.0;
  const double p2 = measure_photons_per_mode(lo, 6).baseline_power_w;
  c.near("LO doubling dB", to_db(p2 / p1), 3.0, 0.3);
  const auto mod =
      read_simulate_config(load_json_file(kConfigDir + "/simulate_modified_detector.json"));
  c.near("clearance dB", measure_photons_per_mode(mod, 77).clearance_db, 10.0, 1.0);
  return c.outcome();
}

Outcome scan_resolution() {
  Checks c;
  {
    const auto cfg = read_scan_plan(load_json_file(kConfigDir + "/scan_tophat_plan.json"));
    const auto in = read_scan_input(load_json_file(kConfigDir + "/scan_tophat_input.json"));
    const auto het = run_scan(cfg.plan, in, 1);
    const auto e = edge_widths_10_90(het);
    c.le("het rising pm", e.rising_m * 1e12, 2.0);
    c.le("het falling pm", e.falling_m * 1e12, 2.0);
    if (!cfg.grating) return {false, "top-hat plan has no grating"};
    const auto truth = truth_spectrum(in, cfg.plan, cfg.grating->resolution);
    const auto osa = grating_osa_emulate(truth, cfg.grating->resolution,
                                         cfg.grating->noise_floor_dbm,
                                         cfg.grating->samples_per_resolution);
    const auto g = edge_widths_10_90(osa);
    c.ge("osa rising pm", g.rising_m * 1e12, 20.0);
    c.ge("osa falling pm", g.falling_m * 1e12, 20.0);
  }
  {
    const auto cfg = read_scan_plan(load_json_file(kConfigDir + "/scan_laser_plan.json"));
    const auto in = read_scan_input(load_json_file(kConfigDir + "/scan_laser_input.json"));
    const auto& line = std::get<LaserLine>(in);
    const auto het = run_scan(cfg.plan, in, 1);
    const double m_per_hz = line.center.meters() * line.center.meters() / kSpeedOfLight;
    const double want = line.laser.linewidth_hz + cfg.plan.lo.linewidth_hz;
    c.rel("FWHM MHz", fwhm(het) / m_per_hz / 1e6, want / 1e6, 0.2);
  }
  return c.outcome();
}

Outcome worker_determinism() {
  Checks c;
  const fs::path tmp = fs::temp_directory_path() / "hetspec_acceptance";
  fs::remove_all(tmp);
  struct Job {
    std::vector<std::string> args;
    std::vector<std::string> files;
  };
  const std::vector<Job> jobs = {
      {{"simulate", "--config", kConfigDir + "/simulate_one_photon.json", "--seed", "42"},
       {"rf_spectrum.csv", "rf_floor.csv"}},
      {{"scan", "--plan", kConfigDir + "/scan_tophat_plan.json", "--input",
        kConfigDir + "/scan_tophat_input.json", "--seed", "42"},
       {"scan_heterodyne.csv", "scan_grating.csv"}},
  };
  for (const auto& job : jobs) {
    std::vector<std::string> contents;
    for (const char* w : {"1", "4", "8"}) {
      const fs::path dir = tmp / (job.args[0] + "_w" + w);
      auto args = job.args;
      args.insert(args.end(), {"--workers", w, "--out", dir.string()});
      std::ostringstream out, err;
      const int code = cli::run_cli(args, out, err);
      if (code != 0) {
        c.truth(job.args[0] + " workers=" + w + " exit " + std::to_string(code), false);
        continue;
      }
      std::string all;
      for (const auto& f : job.files) all += slurp(dir / f);
      contents.push_back(all);
    }
    const bool same = contents.size() == 3 && !contents[0].empty() &&
                      contents[0] == contents[1] && contents[0] == contents[2];
    c.truth(job.args[0] + " CSVs byte-identical at 1/4/8 workers", same);
  }
  fs::remove_all(tmp);
  return c.outcome();
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"photons per mode of -64 dBm/20 pm at 1550 nm", photons_per_mode_from_psd},
      {"mode counts", mode_counts},
      {"source brightness", source_brightness},
      {"detector noise per mode", detector_noise},
      {"variance to photons", variance_dictionary},
      {"sensitivity rescaling", sensitivity_rescale},
      {"Monte-Carlo excess over shot noise", monte_carlo_three_db},
      {"shot floor scaling and clearance", detector_floor},
      {"scan edges and linewidth", scan_resolution},
      {"determinism across worker counts", worker_determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s [%zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
