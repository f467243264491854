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

#include "cli_app.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"

namespace fs = std::filesystem;
using hetspec::json;
using hetspec::cli::run_cli;

namespace {

const std::string kConfigDir = HETSPEC_CONFIG_DIR;

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = fs::temp_directory_path() /
            ("hetspec_cli_" + tag + "_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  std::string sub(const std::string& name) const { return (path_ / name).string(); }
  std::string write(const std::string& name, const json& j) const {
    const auto p = path_ / name;
    std::ofstream(p) << j.dump(2);
    return p.string();
  }

 private:
  fs::path path_;
};

json small_simulation(const std::string& base) {
  json j = hetspec::load_json_file(kConfigDir + "/" + base);
  j["trials"] = 8;
  return j;
}

json small_scan_plan() {
  json j = hetspec::load_json_file(kConfigDir + "/scan_tophat_plan.json");
  j["start"] = "1549.48nm";
  j["stop"] = "1549.52nm";
  j["step"] = "2pm";
  return j;
}

}  // namespace

TEST(Cli, Limit) {
  auto r = cli({"limit", "--bandwidth", "1MHz"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("-98.92 dBm"), std::string::npos) << r.out;
  r = cli({"limit", "--bandwidth", "20pm"});
  EXPECT_NE(r.out.find("-64.95 dBm"), std::string::npos) << r.out;
  r = cli({"limit", "--bandwidth", "0Hz"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("P_min = 0 W"), std::string::npos) << r.out;
  r = cli({"limit", "--frequency", "193.41448903THz", "--bandwidth", "1MHz"});
  EXPECT_NE(r.out.find("-98.92 dBm"), std::string::npos) << r.out;
}

TEST(Cli, Modes) {
  auto r = cli({"modes", "--bandwidth", "1kHz", "--time", "1s"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("N = 1000 "), std::string::npos) << r.out;
  r = cli({"modes", "--bandwidth", "1nm", "--time", "10ns"});
  EXPECT_NE(r.out.find("(rounded"), std::string::npos) << r.out;
  r = cli({"modes", "--bandwidth", "20pm", "--time", "1s", "--psd", "-64dBm/20pm"});
  EXPECT_NE(r.out.find("photons per mode = 1.24"), std::string::npos) << r.out;
  r = cli({"modes", "--bandwidth", "1kHz", "--time", "0s"});
  EXPECT_EQ(r.code, 2);
  r = cli({"modes", "--bandwidth", "1kHz", "--time", "1s", "--polarizations", "3"});
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, Rescale) {
  auto r = cli({"rescale", "--value", "-89dBm", "--from", "0.8fm", "--to", "20pm"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "-45.02 dBm/20pm\n");
  r = cli({"rescale", "--value", "-109dBm", "--from", "0.8fm", "--to", "20pm"});
  EXPECT_EQ(r.out, "-65.02 dBm/20pm\n");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"frobnicate"}).code, 2);
  EXPECT_EQ(cli({"limit"}).code, 2);
  const auto r = cli({"limit", "--bandwidth", "1mhz"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("1mhz"), std::string::npos);
  EXPECT_EQ(cli({"--help"}).code, 0);
  EXPECT_EQ(cli({"--version"}).code, 0);
}

TEST(Cli, SourcesFormats) {
  const std::string cfg = kConfigDir + "/network_sources.json";
  auto r = cli({"sources", "--config", cfg});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("spdc"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("quantum_dot"), std::string::npos);
  r = cli({"sources", "--config", cfg, "--format", "csv"});
  EXPECT_EQ(r.out.rfind("# schema: hetspec.sources/1", 0), 0u) << r.out.substr(0, 80);
  r = cli({"sources", "--config", cfg, "--format", "json"});
  const json j = json::parse(r.out);
  EXPECT_EQ(j["schema"], "hetspec.sources/1");
  EXPECT_EQ(cli({"sources", "--config", cfg, "--format", "xml"}).code, 2);

  TempDir tmp("sources");
  r = cli({"sources", "--config", cfg, "--out", tmp.path().string()});
  EXPECT_TRUE(fs::exists(tmp.path() / "sources.csv"));
  EXPECT_TRUE(fs::exists(tmp.path() / "sources.json"));
  EXPECT_TRUE(fs::exists(tmp.path() / "run_record.json"));
}

TEST(Cli, SourcesEmptyScenario) {
  TempDir tmp("empty");
  const auto p = tmp.path() / "empty.json";
  std::ofstream(p) << "";
  const auto r = cli({"sources", "--config", p.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("missing required"), std::string::npos) << r.err;
  EXPECT_EQ(cli({"sources", "--config", (tmp.path() / "absent.json").string()}).code, 2);
}

TEST(Cli, SimulateWritesOutputs) {
  TempDir tmp("sim");
  const auto cfg = tmp.write("sim.json", small_simulation("simulate_one_photon.json"));
  const auto r = cli({"simulate", "--config", cfg, "--seed", "7", "--workers", "2", "--out",
                      tmp.sub("out")});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string csv = slurp(tmp.path() / "out" / "rf_spectrum.csv");
  EXPECT_EQ(csv.rfind("# schema: hetspec.rf_spectrum/1\n", 0), 0u) << csv.substr(0, 120);
  EXPECT_NE(csv.find("# seed: 7\n"), std::string::npos);
  EXPECT_NE(csv.find("frequency_hz,power_dbm\n"), std::string::npos);
  EXPECT_TRUE(fs::exists(tmp.path() / "out" / "rf_floor.csv"));
  const json m = json::parse(slurp(tmp.path() / "out" / "measurement.json"));
  EXPECT_TRUE(m["shot_noise_limited"].get<bool>());
  const json rec = json::parse(slurp(tmp.path() / "out" / "run_record.json"));
  EXPECT_EQ(rec["seed"], 7);
  EXPECT_EQ(rec["command"], "simulate");
}

TEST(Cli, SimulateNotShotNoiseLimitedExits3) {
  TempDir tmp("sim3");
  json j = small_simulation("simulate_lo_only.json");
  j["detector"]["electronics_noise"] = "100pA/rtHz";
  const auto r = cli({"simulate", "--config", tmp.write("s.json", j), "--workers", "1", "--out",
                      tmp.sub("out")});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("not shot-noise limited"), std::string::npos) << r.err;
}

TEST(Cli, SimulateConfigErrorExits2) {
  TempDir tmp("sim2");
  json j = small_simulation("simulate_lo_only.json");
  j["esa"]["rbww"] = "1MHz";
  const auto r = cli({"simulate", "--config", tmp.write("s.json", j), "--out", tmp.sub("out")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("esa.rbww"), std::string::npos) << r.err;
}

TEST(Cli, SimulateDeterministicAcrossWorkers) {
  TempDir tmp("simw");
  const auto cfg = tmp.write("sim.json", small_simulation("simulate_one_photon.json"));
  std::vector<std::string> spectra, reports;
  for (const char* w : {"1", "4", "8"}) {
    const auto dir = tmp.sub(std::string("w") + w);
    ASSERT_EQ(cli({"simulate", "--config", cfg, "--seed", "11", "--workers", w, "--out", dir}).code, 0);
    spectra.push_back(slurp(fs::path(dir) / "rf_spectrum.csv") + slurp(fs::path(dir) / "rf_floor.csv"));
    reports.push_back(slurp(fs::path(dir) / "measurement.json"));
  }
  EXPECT_EQ(spectra[0], spectra[1]);
  EXPECT_EQ(spectra[0], spectra[2]);
  EXPECT_EQ(reports[0], reports[2]);
}

TEST(Cli, ScanDeterministicAcrossWorkers) {
  TempDir tmp("scanw");
  const auto plan = tmp.write("plan.json", small_scan_plan());
  const auto input = kConfigDir + "/scan_tophat_input.json";
  std::vector<std::string> het, osa;
  for (const char* w : {"1", "4", "8"}) {
    const auto dir = tmp.sub(std::string("w") + w);
    const auto r = cli({"scan", "--plan", plan, "--input", input, "--seed", "3", "--workers", w,
                        "--out", dir});
    ASSERT_EQ(r.code, 0) << r.err;
    het.push_back(slurp(fs::path(dir) / "scan_heterodyne.csv"));
    osa.push_back(slurp(fs::path(dir) / "scan_grating.csv"));
  }
  EXPECT_EQ(het[0], het[1]);
  EXPECT_EQ(het[0], het[2]);
  EXPECT_EQ(osa[0], osa[2]);
  EXPECT_EQ(het[0].rfind("# schema: hetspec.optical_spectrum/1\n", 0), 0u);
  EXPECT_NE(het[0].find("wavelength_nm,power_dbm\n"), std::string::npos);
  const json rep = json::parse(slurp(fs::path(tmp.sub("w1")) / "scan_report.json"));
  EXPECT_TRUE(rep.contains("comparison"));
}

TEST(Cli, RunRecordReproducesOutputs) {
  TempDir tmp("rerun");
  const auto plan = tmp.write("plan.json", small_scan_plan());
  ASSERT_EQ(cli({"scan", "--plan", plan, "--input", kConfigDir + "/scan_tophat_input.json", "--seed",
                 "5", "--out", tmp.sub("a")})
                .code,
            0);
  const json rec = json::parse(slurp(fs::path(tmp.sub("a")) / "run_record.json"));
  const auto plan2 = tmp.write("plan2.json", rec["config"]["plan"]);
  const auto input2 = tmp.write("input2.json", rec["config"]["input"]);
  ASSERT_EQ(cli({"scan", "--plan", plan2, "--input", input2, "--seed",
                 std::to_string(rec["seed"].get<std::uint64_t>()), "--workers", "3", "--out",
                 tmp.sub("b")})
                .code,
            0);
  EXPECT_EQ(slurp(fs::path(tmp.sub("a")) / "scan_heterodyne.csv"),
            slurp(fs::path(tmp.sub("b")) / "scan_heterodyne.csv"));
}

TEST(Cli, OutputDirFromEnvironment) {
  TempDir tmp("env");
  ::setenv("HETSPEC_OUTPUT_DIR", tmp.path().c_str(), 1);
  const auto r = cli({"scan", "--plan", tmp.write("plan.json", small_scan_plan()), "--input",
                      kConfigDir + "/scan_tophat_input.json", "--workers", "1"});
  ::unsetenv("HETSPEC_OUTPUT_DIR");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(tmp.path() / "scan_heterodyne.csv"));
  EXPECT_TRUE(fs::exists(tmp.path() / "run_record.json"));
}
