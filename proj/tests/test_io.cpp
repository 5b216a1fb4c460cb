// Copyright 2026 The qwalk-nm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <random>
#include <sstream>

#include "qwalk/io/cli.hpp"
#include "qwalk/io/commands.hpp"
#include "qwalk/io/format.hpp"

namespace qwalk::io {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("qwalk_io_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  std::string str(const std::string& sub = "") const { return (path_ / sub).string(); }

 private:
  fs::path path_;
};

struct CliRun {
  int code;
  std::string out, err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "qwalk-nm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string error_kind(const CliRun& r) {
  return json::parse(r.err).at("error").at("kind").get<std::string>();
}

// --- formatting ------------------------------------------------------------------

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(-0.0), "0");
  EXPECT_EQ(format_double(1e-20), "1e-20");
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_double(std::nan("")), "nan");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 10000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    const auto s = format_double(v);
    EXPECT_LE(s.size(), 24u);
    EXPECT_EQ(parse_double(s), v) << s;
  }
}

TEST(Csv, WriteAndParse) {
  CsvWriter w({"t", "x"});
  w.row(std::vector<double>{0, 0.25});
  w.row(std::vector<double>{1, 1.0 / 3.0});
  EXPECT_EQ(w.str(), "t,x\n0,0.25\n1,0.3333333333333333\n");
  EXPECT_THROW(w.row(std::vector<double>{1.0}), ShapeError);
  const auto t = parse_csv(w.str());
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[1][t.column("x")], 1.0 / 3.0);
  EXPECT_THROW(t.column("y"), UsageError);
  EXPECT_THROW(parse_csv("a,b\n1\n"), UsageError);
  EXPECT_THROW(parse_csv("a\nfoo\n"), UsageError);
}

TEST(Checksum, KnownDigests) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

// --- configuration ------------------------------------------------------------------

TEST(ExperimentConfig, JsonRoundTripIsLossless) {
  ExperimentConfig c;
  EXPECT_EQ(json(c).get<ExperimentConfig>(), c);

  c.command = "sweep-variance";
  c.steps = 37;
  c.coin_theta = 0.1 + 0.2;
  c.coin_init = "custom:0.6,0,0,0.8";
  c.initial_position = -3;
  c.halfwidth = 64;
  c.noise = {"rtn", 1.0 / 3.0, 5e-4, 0.125, 3.0};
  c.paired = true;
  c.filter = "expfit";
  c.bands = {0.21, 0.33, 0.01, 0.09};
  c.a_grid = {0.0, 0.1, 1e-3, 2.5};
  c.gammas = {0.001, 5.0};
  c.threads = 3;
  const auto text = json(c).dump();
  EXPECT_EQ(parse_config(text), c);
}

TEST(ExperimentConfig, RejectsUnknownKeysAndSchema) {
  EXPECT_THROW(parse_config(R"({"steps": 3, "stpes": 4})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"steps": "three"})"), ConfigError);
  EXPECT_THROW(parse_config("{not json"), ConfigError);
  auto c = parse_config(R"({"schema_version": 2})");
  EXPECT_THROW(validate(c), ConfigError);
}

TEST(ExperimentConfig, CoinSpecs) {
  EXPECT_EQ(parse_coin("plus"), coins::plus());
  const auto c = parse_coin("custom:0.6,0,0,0.8");
  EXPECT_EQ(c[0], complex(0.6, 0));
  EXPECT_EQ(c[1], complex(0, 0.8));
  EXPECT_THROW(parse_coin("custom:1,0"), UsageError);
  EXPECT_THROW(parse_coin("heads"), UsageError);
}

TEST(ExperimentConfig, Validation) {
  ExperimentConfig c;
  EXPECT_NO_THROW(validate(c));
  c.command = "sweep-variance";
  c.noise.kind = "rtn";
  EXPECT_THROW(validate(c), UsageError);  // empty grid
  c.a_grid = {0.0, 0.5};
  EXPECT_NO_THROW(validate(c));
  c.a_grid = {-0.5};
  EXPECT_THROW(validate(c), ConfigError);

  ExperimentConfig s;
  s.command = "spectrum";
  s.steps = 6;
  EXPECT_THROW(validate(s), UsageError);
  s.steps = 7;
  EXPECT_NO_THROW(validate(s));
  s.bands = {0.2, 0.35, 0.3, 0.4};
  EXPECT_THROW(validate(s), UsageError);

  ExperimentConfig n;
  n.noise = {"oun", 0.1, -1.0, 0.1, 3.0};
  EXPECT_THROW(validate(n), ConfigError);
  n.noise = {"pln", 0.1, 0.01, 0.1, 2.0};
  EXPECT_THROW(validate(n), UnsupportedError);
  n.noise = {"rtn", 0.05, 0.001, 0.1, 3.0};
  n.coin_init = "custom:1,0,1,0";
  EXPECT_THROW(validate(n), ConfigError);
}

// --- pool and plots -------------------------------------------------------------

TEST(ParallelMap, OrderStableAndRethrowsLowestIndex) {
  auto r = parallel_map(50, 4, [](std::size_t i) { return i * i; });
  for (std::size_t i = 0; i < r.size(); ++i) EXPECT_EQ(r[i], i * i);
  try {
    parallel_map(10, 3, [](std::size_t i) -> int {
      if (i == 7 || i == 4) throw ConfigError("item " + std::to_string(i));
      return 0;
    });
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_STREQ(e.what(), "item 4");
  }
  EXPECT_TRUE(parallel_map(0, 4, [](std::size_t) { return 1; }).empty());
}

TEST(Svg, DeterministicAndLogAxisSkipsNonPositive) {
  LinePlot p{"t", "x", "y", true, {{"a", {0, 1, 2}, {0.0, 10.0, 100.0}}, {"b", {0, 2}, {1, 1}, true}}};
  const auto s = p.render();
  EXPECT_EQ(s, p.render());
  EXPECT_NE(s.find("<svg"), std::string::npos);
  EXPECT_NE(s.find("stroke-dasharray"), std::string::npos);
  EXPECT_EQ(s.find("<script"), std::string::npos);
  EXPECT_EQ(s.find("nan"), std::string::npos);
  LinePlot bad{"t", "x", "y", false, {{"a", {0, 1}, {0.0}}}};
  EXPECT_THROW(bad.render(), ShapeError);
}

// --- commands ------------------------------------------------------------------------

TEST(CmdWalk, ZeroStepsIsSingleRow) {
  TempDir d;
  auto r = cli({"walk", "--steps", "0", "--out", d.str("w")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto t = parse_csv(read_text_file(d.path() / "w" / "distribution.csv"));
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_NEAR(t.rows[0][t.column("0")], 1.0, 1e-15);
  EXPECT_EQ(t.header.size(), 4u);  // t, -1, 0, 1
}

TEST(CmdWalk, ByteIdenticalOutputAndAudit) {
  TempDir d;
  const std::vector<std::string> base{"walk", "--steps", "12", "--noise", "rtn", "--a", "0.3",
                                      "--gamma", "0.01", "--paired", "--plots"};
  auto a = base, b = base;
  a.insert(a.end(), {"--out", d.str("a")});
  b.insert(b.end(), {"--out", d.str("b"), "--threads", "1"});
  ASSERT_EQ(cli(a).code, 0);
  ASSERT_EQ(cli(b).code, 0);
  for (const char* f : {"distribution.csv", "variance.csv", "observables.csv", "variance.svg"})
    EXPECT_EQ(read_text_file(d.path() / "a" / f), read_text_file(d.path() / "b" / f)) << f;

  const auto rep = audit_manifest(d.path() / "a");
  EXPECT_TRUE(rep.ok());
  EXPECT_EQ(rep.checked, 6u);

  const auto m = json::parse(read_text_file(d.path() / "a" / "manifest.json"));
  EXPECT_EQ(m.at("regime")[0].at("label"), "non-markovian");
  EXPECT_EQ(m.at("config").get<ExperimentConfig>().noise.a, 0.3);

  // Re-running from the manifest reproduces the data.
  ASSERT_EQ(cli({"walk", "--config", d.str("a/manifest.json"), "--out", d.str("c")}).code, 0);
  EXPECT_EQ(read_text_file(d.path() / "a" / "observables.csv"),
            read_text_file(d.path() / "c" / "observables.csv"));
}

TEST(CmdWalk, ObservablesColumns) {
  TempDir d;
  ASSERT_EQ(cli({"walk", "--steps", "4", "--noise", "oun", "--Gamma", "0.1", "--gamma", "0.01",
                 "--out", d.str()}).code, 0);
  const auto t = parse_csv(read_text_file(d.path() / "observables.csv"));
  EXPECT_EQ(t.header, (std::vector<std::string>{"t", "decoherence", "mutual_information"}));
  EXPECT_EQ(t.rows.size(), 5u);
  EXPECT_EQ(t.rows[0][1], 1.0);
  EXPECT_LT(t.rows[4][1], 1.0);
  const auto v = parse_csv(read_text_file(d.path() / "variance.csv"));
  EXPECT_NEAR(v.rows[1][v.column("variance")], 1.0, 1e-15);
}

TEST(CmdWalk, SeedRecordedInManifest) {
  TempDir d;
  ::setenv(kSeedVariable, "1234", 1);
  ASSERT_EQ(cli({"walk", "--steps", "1", "--out", d.str()}).code, 0);
  ::unsetenv(kSeedVariable);
  const auto m = json::parse(read_text_file(d.path() / "manifest.json"));
  EXPECT_EQ(m.at("seed"), "1234");
}

TEST(Audit, DetectsTamperingAndStrayFiles) {
  TempDir d;
  ASSERT_EQ(cli({"walk", "--steps", "2", "--out", d.str()}).code, 0);
  ASSERT_TRUE(audit_manifest(d.path()).ok());
  write_text_file(d.path() / "extra.csv", "x\n");
  EXPECT_EQ(audit_manifest(d.path()).problems.size(), 1u);
  fs::remove(d.path() / "extra.csv");
  auto text = read_text_file(d.path() / "variance.csv");
  text[text.size() - 2] = text[text.size() - 2] == '1' ? '2' : '1';
  write_text_file(d.path() / "variance.csv", text);
  const auto rep = audit_manifest(d.path());
  ASSERT_FALSE(rep.ok());
  EXPECT_NE(rep.problems[0].find("checksum"), std::string::npos);

  auto r = cli({"selftest", "--audit", d.str()});
  EXPECT_EQ(r.code, 4);
  EXPECT_EQ(error_kind(r), "integrity");
  fs::remove(d.path() / "variance.csv");
  EXPECT_FALSE(audit_manifest(d.path()).ok());
}

TEST(CmdSweepVariance, ZeroAmplitudeIsNoiseless) {
  TempDir d;
  auto r = cli({"sweep-variance", "--noise", "rtn", "--steps", "10", "--a-grid", "0,0.5",
                "--gammas", "0.001,5", "--out", d.str()});
  ASSERT_EQ(r.code, 0) << r.err;
  // The regime column is text, so split by hand.
  const auto text = read_text_file(d.path() / "variance_vs_a.csv");
  const auto lines = split(text, '\n');
  ASSERT_EQ(lines.size(), 6u);  // header, 4 rows, trailing empty
  EXPECT_EQ(lines[0], "a,gamma,variance,classical,noiseless,regime");
  for (int i = 1; i <= 4; ++i) {
    const auto cells = split(lines[i], ',');
    EXPECT_EQ(cells[3], "10");
    if (cells[0] == "0") {
      EXPECT_EQ(cells[2], cells[4]);
      EXPECT_EQ(cells[5], "noiseless");
    }
  }
  EXPECT_EQ(split(lines[2], ',')[5], "non-markovian");  // 2a/gamma = 1000
  EXPECT_EQ(split(lines[4], ',')[5], "markovian");      // 2a/gamma = 0.2
  EXPECT_TRUE(fs::exists(d.path() / "plot.svg"));
  EXPECT_TRUE(audit_manifest(d.path()).ok());
}

TEST(CmdSweepVariance, FastAndSlowFluctuators) {
  TempDir d;
  auto r = cli({"sweep-variance", "--noise", "rtn", "--a-grid", "0.01,0.02,0.2,0.7", "--gammas",
                "5,0.001", "--out", d.str()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = split(read_text_file(d.path() / "variance_vs_a.csv"), '\n');
  std::vector<double> fast, slow;
  for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
    const auto cells = split(lines[i], ',');
    (cells[1] == "5" ? fast : slow).push_back(parse_double(cells[2]));
  }
  ASSERT_EQ(fast.size(), 4u);
  ASSERT_EQ(slow.size(), 4u);
  // gamma = 5: monotone decay towards the classical value from above.
  for (std::size_t i = 0; i + 1 < fast.size(); ++i) EXPECT_LT(fast[i + 1], fast[i]);
  EXPECT_GT(fast.back(), 100.0);
  // gamma = 0.001: not monotone, and sub-classical at large amplitude.
  EXPECT_GT(slow[1], slow[0]);
  EXPECT_LT(slow.back(), 100.0);
}

TEST(CmdSpectrum, MonotoneInputHasNoPeaks) {
  TempDir d;
  CsvWriter w({"t", "td"});
  for (int t = 0; t < 20; ++t) w.row(std::vector<double>{static_cast<double>(t), std::exp(-0.1 * t)});
  write_text_file(d.path() / "in.csv", w.str());
  auto r = cli({"spectrum", "--input", d.str("in.csv"), "--out", d.str("s")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto peaks = json::parse(read_text_file(d.path() / "s" / "peaks.json"));
  EXPECT_TRUE(peaks.at("runs")[0].at("peaks").empty());
  EXPECT_TRUE(peaks.at("runs")[0].at("monotone_trend").get<bool>());
  EXPECT_TRUE(audit_manifest(d.path() / "s").ok());
}

TEST(CmdSpectrum, ComparesRuns) {
  TempDir d;
  auto r = cli({"spectrum", "--series", "mi", "--noise", "rtn", "--a", "0.05", "--gammas",
                "0.001,1", "--include-noiseless", "--steps", "15", "--out", d.str()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto peaks = json::parse(read_text_file(d.path() / "peaks.json"));
  ASSERT_EQ(peaks.at("runs").size(), 3u);
  EXPECT_EQ(peaks.at("runs")[0].at("label"), "noiseless");
  const auto spec = parse_csv(read_text_file(d.path() / "spectrum.csv"));
  EXPECT_EQ(spec.rows.size(), 16u);
  EXPECT_EQ(spec.header.size(), 5u);
}

// --- exit codes ---------------------------------------------------------------------------

TEST(Cli, ExitCodes) {
  TempDir d;
  auto r = cli({"walk", "--bogus"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(error_kind(r), "usage");
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"walk", "--noise", "blue"}).code, 2);

  r = cli({"walk", "--noise", "rtn", "--gamma", "-1", "--out", d.str("x")});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(error_kind(r), "config");
  EXPECT_FALSE(fs::exists(d.path() / "x"));  // validated before any output

  r = cli({"walk", "--noise", "pln", "--alpha", "2", "--out", d.str("x")});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(error_kind(r), "unsupported");

  EXPECT_EQ(cli({"sweep-variance", "--noise", "rtn", "--out", d.str("x")}).code, 2);
  EXPECT_EQ(cli({"spectrum", "--steps", "5", "--out", d.str("x")}).code, 2);
  EXPECT_EQ(cli({"walk", "--bands", "0.1,0.2", "--out", d.str("x")}).code, 2);
  EXPECT_EQ(cli({"walk", "--coin-init", "custom:2,0,0,0", "--out", d.str("x")}).code, 3);
  EXPECT_EQ(cli({"walk", "--config", d.str("missing.json")}).code, 2);
  EXPECT_EQ(cli({"selftest"}).code, 0);
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST(Cli, ExecutableReportsExitStatus) {
  TempDir d;
  const std::string exe = QWALK_NM_EXE;
  auto status = [](const std::string& cmd) {
    const int s = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  EXPECT_EQ(status(exe + " walk --steps 2 --out " + d.str("ok")), 0);
  EXPECT_EQ(status(exe + " walk --nope"), 2);
  EXPECT_EQ(status(exe + " walk --noise oun --Gamma 0 --out " + d.str("bad")), 3);
  EXPECT_EQ(status(exe + " selftest --audit " + d.str("ok")), 0);
}

}  // namespace
}  // namespace qwalk::io
