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

// hetspec command-line application. `run_cli` is the whole program minus
// process plumbing, so tests can drive it in-process.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "hetspec/config.hpp"
#include "hetspec/errors.hpp"
#include "hetspec/modes.hpp"
#include "hetspec/report.hpp"
#include "hetspec/scan.hpp"
#include "hetspec/signal_chain.hpp"
#include "hetspec/sources.hpp"
#include "hetspec/unit_parser.hpp"

namespace hetspec::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kAssumption = 3 };

inline constexpr const char* kUnitHelp =
    "Values take a unit suffix: lengths fm pm nm um m, frequencies Hz kHz MHz GHz THz, "
    "times ps ns us ms s, powers fW pW nW uW mW W dBm.";

struct Options {
  // limit / modes / rescale
  std::string wavelength = "1550nm";
  std::string frequency;
  std::string bandwidth;
  std::string time;
  int polarizations = 1;
  std::string psd;
  double efficiency = 1.0;
  std::string value, from, to;
  // sources / simulate / scan
  std::string config, plan, input, format = "pretty", out;
  std::uint64_t seed = 1;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
};

namespace detail {

inline double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline std::filesystem::path out_dir(const Options& o) {
  return o.out.empty() ? default_output_dir() : std::filesystem::path(o.out);
}

inline Frequency optical_frequency(const Options& o) {
  if (!o.frequency.empty()) return parse_frequency(o.frequency);
  return wavelength_to_frequency(parse_wavelength(o.wavelength));
}

inline int cmd_limit(const Options& o, std::ostream& out) {
  const Frequency nu = optical_frequency(o);
  const Frequency bw = bandwidth_hz(parse_bandwidth(o.bandwidth), frequency_to_wavelength(nu));
  const auto p = quantum_limit_power(nu, bw);
  out << format("P_min = %.6g W (%.2f dBm) at %.6g Hz optical, %.6g Hz bandwidth\n", p.watts(),
                p.dbm(), nu.hz(), bw.hz());
  return kOk;
}

inline int cmd_modes(const Options& o, std::ostream& out) {
  const Wavelength wl = parse_wavelength(o.wavelength);
  const Frequency bw = bandwidth_hz(parse_bandwidth(o.bandwidth), wl);
  const double t = parse_duration(o.time);
  const ModeWindow w(bw, t, o.polarizations);
  const double n = mode_count(w);
  out << format("N = %.6g (rounded %.0e)\n", n, round_significant(n, 1));
  if (!o.psd.empty()) {
    const double s = parse_psd(o.psd, wl);
    const auto ppm = photons_per_mode(PowerSpectralDensity(s),
                                      wavelength_to_frequency(wl), o.efficiency);
    out << format("photons per mode = %.6g\n", ppm.value);
    out << format("SNR = %.6g (%s)\n", snr_from_photons_per_mode(ppm),
                  to_string(classify_snr(snr_from_photons_per_mode(ppm))));
    out << format("excess over shot noise = %.4f dB\n", db_above_shot(ppm));
  }
  return kOk;
}

inline int cmd_rescale(const Options& o, std::ostream& out) {
  const double dbm = parse_dbm(o.value);
  const Wavelength wl = parse_wavelength(o.wavelength);
  const Bandwidth from = parse_bandwidth(o.from);
  const Bandwidth to = parse_bandwidth(o.to);
  const double v = rescale_sensitivity(dbm, bandwidth_hz(from, wl), bandwidth_hz(to, wl));
  out << format("%.2f dBm/%s\n", v, o.to.c_str());
  return kOk;
}

inline int cmd_sources(const Options& o, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const json doc = load_json_file(o.config);
  const SourcesScenario sc = read_sources_scenario(doc);
  const auto rows = evaluate_sources(sc);
  std::ostringstream csv;
  write_sources_csv(csv, sc, rows);
  const std::string js = sources_json(sc, rows).dump(2) + "\n";
  if (o.format == "csv") {
    out << csv.str();
  } else if (o.format == "json") {
    out << js;
  } else {
    out << sources_table(rows);
  }
  if (!o.out.empty()) {
    RunRecord rec;
    rec.command = "sources";
    rec.config = doc;
    rec.outputs.push_back(write_text_file(out_dir(o), "sources.csv", csv.str()));
    rec.outputs.push_back(write_text_file(out_dir(o), "sources.json", js));
    rec.wall_clock_s = elapsed_s(t0);
    write_text_file(out_dir(o), "run_record.json", to_json(rec).dump(2) + "\n");
  }
  return kOk;
}

inline int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  const json doc = load_json_file(o.config);
  const HeterodyneConfig cfg = read_simulate_config(doc);
  const SimulationResult r = run_simulation(cfg, o.seed, o.workers);
  const auto& m = r.measurement;

  const Metadata extra{{"center_hz", exact(cfg.esa.center_hz)},
                       {"trials", std::to_string(cfg.trials)}};
  std::ostringstream sig, flo;
  write_rf_csv(sig, r.spectrum, "simulate", extra);
  write_rf_csv(flo, r.floor, "simulate", extra);
  json rep = to_json(m);
  rep["seed"] = o.seed;

  const auto dir = out_dir(o);
  RunRecord rec;
  rec.command = "simulate";
  rec.config = doc;
  rec.seed = o.seed;
  rec.workers = o.workers;
  rec.outputs.push_back(write_text_file(dir, "rf_spectrum.csv", sig.str()));
  rec.outputs.push_back(write_text_file(dir, "rf_floor.csv", flo.str()));
  rec.outputs.push_back(write_text_file(dir, "measurement.json", rep.dump(2) + "\n"));
  rec.wall_clock_s = elapsed_s(t0);
  write_text_file(dir, "run_record.json", to_json(rec).dump(2) + "\n");

  out << format("excess over shot noise at %.6g Hz: %.3f dB (predicted %.3f dB)\n",
                cfg.esa.center_hz, m.db_above_shot, m.predicted_db);
  out << format("photons per mode: measured %.4g, predicted %.4g\n", m.measured_photons,
                m.predicted_photons);
  out << format("shot floor over electronics floor: %.2f dB\n", m.clearance_db);
  out << "outputs written to " << dir.string() << "\n";
  for (const auto& w : m.warnings) err << "warning: " << w << "\n";
  if (!m.shot_noise_limited) {
    err << "error: receiver is not shot-noise limited\n";
    return kAssumption;
  }
  return kOk;
}

inline int cmd_scan(const Options& o, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  const json plan_doc = load_json_file(o.plan);
  const json input_doc = load_json_file(o.input);
  const ScanConfig cfg = read_scan_plan(plan_doc);
  const ScanInput input = read_scan_input(input_doc);

  const auto het = run_scan(cfg.plan, input, o.seed, o.workers);
  const auto dir = out_dir(o);
  RunRecord rec;
  rec.command = "scan";
  rec.config = {{"plan", plan_doc}, {"input", input_doc}};
  rec.seed = o.seed;
  rec.workers = o.workers;

  std::ostringstream het_csv;
  write_optical_csv(het_csv, het, "scan");
  rec.outputs.push_back(write_text_file(dir, "scan_heterodyne.csv", het_csv.str()));

  json rep;
  rep["seed"] = o.seed;
  auto metrics = [](const OpticalSpectrumResult& r) {
    const auto e = edge_widths_10_90(r);
    const double w = fwhm(r);
    auto pm = [](double m) { return std::isfinite(m) ? json(m * 1e12) : json(nullptr); };
    return json{{"edge_10_90_rising_pm", pm(e.rising_m)},
                {"edge_10_90_falling_pm", pm(e.falling_m)},
                {"fwhm_pm", pm(w)},
                {"resolution_pm", r.resolution.pm()}};
  };
  rep["heterodyne"] = metrics(het);
  rep["heterodyne"]["floor_photons_per_mode"] = scan_floor_photons(het, cfg.plan.detector.efficiency);
  rep["heterodyne"]["warnings"] = het.warnings;

  out << "heterodyne scan: " << het.wavelength_m.size() << " steps, resolution "
      << format("%.4g pm", het.resolution.pm()) << "\n";
  auto print_metrics = [&](const char* name, const json& j) {
    auto show = [](const json& v) { return v.is_null() ? std::string("n/a") : format("%.3f", v.get<double>()); };
    out << format("  %-10s edge 10-90 %s / %s pm, FWHM %s pm\n", name,
                  show(j["edge_10_90_rising_pm"]).c_str(), show(j["edge_10_90_falling_pm"]).c_str(),
                  show(j["fwhm_pm"]).c_str());
  };
  print_metrics("heterodyne", rep["heterodyne"]);

  if (cfg.grating) {
    const auto truth = truth_spectrum(input, cfg.plan, cfg.grating->resolution);
    auto osa = grating_osa_emulate(truth, cfg.grating->resolution, cfg.grating->noise_floor_dbm,
                                   cfg.grating->samples_per_resolution);
    osa.seed = o.seed;
    std::ostringstream osa_csv;
    write_optical_csv(osa_csv, osa, "scan");
    rec.outputs.push_back(write_text_file(dir, "scan_grating.csv", osa_csv.str()));
    rep["grating"] = metrics(osa);
    print_metrics("grating", rep["grating"]);
    if (cfg.snspd) {
      const auto sc = scenario_for(input, cfg.plan, cfg.counting_threshold);
      const auto model = DetectorNoiseModel::snspd_filtered(cfg.snspd->dark_rate,
                                                            cfg.snspd->filter, sc.center);
      const auto cmp = compare_sensitivity(het, osa, model, sc);
      rep["comparison"] = to_json(cmp);
      out << comparison_table(cmp);
    }
  }
  rec.outputs.push_back(write_text_file(dir, "scan_report.json", rep.dump(2) + "\n"));
  rec.wall_clock_s = elapsed_s(t0);
  write_text_file(dir, "run_record.json", to_json(rec).dump(2) + "\n");
  for (const auto& w : het.warnings) err << "warning: " << w << "\n";
  out << "outputs written to " << dir.string() << "\n";
  return kOk;
}

}  // namespace detail

/// Runs the CLI with `args` (excluding the program name).
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Heterodyne spectrometer sensitivity toolkit", "hetspec"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  app.footer(kUnitHelp);
  Options o;

  auto* limit = app.add_subcommand("limit", "Quantum-limited minimum detectable power h nu B");
  limit->add_option("--wavelength", o.wavelength, "Optical wavelength (default 1550nm)");
  limit->add_option("--frequency", o.frequency, "Optical frequency, instead of --wavelength");
  limit->add_option("--bandwidth", o.bandwidth, "Detection bandwidth (Hz or length units)")->required();

  auto* modes = app.add_subcommand("modes", "Spectral-temporal mode count N = B T");
  modes->add_option("--bandwidth", o.bandwidth, "Bandwidth (Hz or length units)")->required();
  modes->add_option("--time", o.time, "Integration time")->required();
  modes->add_option("--wavelength", o.wavelength, "Center wavelength for length bandwidths");
  modes->add_option("--polarizations", o.polarizations, "1 or 2")->check(CLI::IsMember({1, 2}));
  modes->add_option("--psd", o.psd, "Optional input PSD, e.g. -64dBm/20pm, for photons per mode");
  modes->add_option("--efficiency", o.efficiency, "Detection efficiency for --psd")
      ->check(CLI::Range(0.0, 1.0));

  auto* rescale = app.add_subcommand("rescale", "Re-express a dBm-per-bandwidth sensitivity");
  rescale->add_option("--value", o.value, "Level, e.g. -89dBm")->required();
  rescale->add_option("--from", o.from, "Bandwidth the level refers to, e.g. 0.8fm")->required();
  rescale->add_option("--to", o.to, "Target bandwidth, e.g. 20pm")->required();
  rescale->add_option("--wavelength", o.wavelength, "Center wavelength (default 1550nm)");

  auto* sources = app.add_subcommand("sources", "Photons per mode of sources against detectors");
  sources->add_option("--config", o.config, "Scenario file (JSON)")->required();
  sources->add_option("--format", o.format, "pretty, csv or json")
      ->check(CLI::IsMember({"pretty", "csv", "json"}));
  sources->add_option("--out", o.out, "Also write sources.csv/json and a run record here");

  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo heterodyne measurement");
  simulate->add_option("--config", o.config, "Simulation config (JSON)")->required();
  simulate->add_option("--seed", o.seed, "Master seed");
  simulate->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
  simulate->add_option("--out", o.out, "Output directory (default $HETSPEC_OUTPUT_DIR or .)");

  auto* scan = app.add_subcommand("scan", "LO-swept spectrum and grating comparison");
  scan->add_option("--plan", o.plan, "Scan plan (JSON)")->required();
  scan->add_option("--input", o.input, "Scan input (JSON)")->required();
  scan->add_option("--seed", o.seed, "Master seed");
  scan->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
  scan->add_option("--out", o.out, "Output directory (default $HETSPEC_OUTPUT_DIR or .)");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*limit) return detail::cmd_limit(o, out);
    if (*modes) return detail::cmd_modes(o, out);
    if (*rescale) return detail::cmd_rescale(o, out);
    if (*sources) return detail::cmd_sources(o, out);
    if (*simulate) return detail::cmd_simulate(o, out, err);
    if (*scan) return detail::cmd_scan(o, out, err);
  } catch (const config_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const assumption_violation& e) {
    err << "error: " << e.what() << "\n";
    return kAssumption;
  }
  return kUsage;
}

}  // namespace hetspec::cli
