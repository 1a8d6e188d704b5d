#include "cli.hpp"

#include "ratebench/csv.hpp"
#include "ratebench/files.hpp"
#include "ratebench/runlog.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <map>
#include <random>
#include <sstream>

using namespace ratebench;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "ratebench");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string suite_path() { return (rbtest::source_dir() / "suites/synth/synth.toml").string(); }

std::vector<std::string> run_args(const fs::path& out, std::vector<std::string> extra) {
  std::vector<std::string> args{"run", "--suite", suite_path(), "--out", out.string(),
                                "--harness", rbtest::harness_path().string(), "--iterations", "1"};
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

}  // namespace

TEST(Cli, HelpListsEveryFlag) {
  const std::map<std::string, std::vector<std::string>> flags{
      {"run", {"--suite", "--mode", "--copies", "--inc", "--step", "--iterations", "--pin", "--out", "--benchmarks",
               "--power", "--harness"}},
      {"score", {"--log", "--suite", "--out", "--power"}},
      {"bbv", {"--trace", "--out", "--format", "--interval", "--raw", "--threads"}},
      {"perfplot", {"--samples", "--interval", "--bbv", "--out", "--smooth"}},
      {"synth", {"--kind", "--units", "--mib", "--out"}},
  };
  const auto top = invoke({"--help"});
  EXPECT_EQ(top.code, 0);
  for (const auto& [cmd, list] : flags) {
    EXPECT_NE(top.out.find(cmd), std::string::npos) << cmd;
    const auto help = invoke({cmd, "--help"});
    EXPECT_EQ(help.code, 0);
    for (const auto& f : list) EXPECT_NE(help.out.find(f), std::string::npos) << cmd << " " << f;
  }
}

TEST(Cli, RrrRunWritesArtifacts) {
  const auto out = rbtest::fresh_dir("cli-rrr");
  const auto r = invoke(run_args(out, {"--mode", "rrr", "--copies", "3", "--inc", "1"}));
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"runlog.csv", "runlog.json", "report.txt", "timeplot.svg", "scores.json", "schedule.csv",
                        "validation.json", "rrr_slowdown.csv", "rrr_metrics.json"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
}

TEST(Cli, RrrFlagsRejectedInRateMode) {
  const auto out = rbtest::fresh_dir("cli-conflict");
  EXPECT_EQ(invoke(run_args(out, {"--mode", "rate", "--inc", "5"})).code, 2);
  EXPECT_EQ(invoke(run_args(out, {"--step", "3"})).code, 2);
}

TEST(Cli, UsageErrors) {
  const auto out = rbtest::fresh_dir("cli-usage");
  EXPECT_EQ(invoke({"run"}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke(run_args(out, {"--mode", "speed"})).code, 2);
  EXPECT_EQ(invoke(run_args(out, {"--mode", "rrr", "--step", "2"})).code, 2);
  EXPECT_EQ(invoke({"run", "--suite", "/nonexistent.toml", "--out", out.string()}).code, 2);
  EXPECT_EQ(invoke(run_args(out, {"--benchmarks", "syn.nothing"})).code, 2);
}

TEST(Cli, BenchmarkSubsetUsedDownstream) {
  const auto out = rbtest::fresh_dir("cli-subset");
  const auto r = invoke(run_args(out, {"--copies", "2", "--benchmarks", "syn.spin"}));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto log = load_runlog(out / "runlog.csv");
  EXPECT_EQ(log.roster, (std::vector<std::string>{"syn.spin"}));
  EXPECT_EQ(log.events.size(), 2u);
  EXPECT_EQ(read_file(out / "schedule.csv"), "copy,seq,bench_id\n0,0,syn.spin\n1,0,syn.spin\n");
}

TEST(Cli, ScoreReplayIsByteIdentical) {
  const auto out = rbtest::fresh_dir("cli-score");
  ASSERT_EQ(invoke(run_args(out, {"--copies", "2", "--benchmarks", "syn.spin,syn.duo"})).code, 0);
  const auto again = out / "rescored";
  const auto r = invoke({"score", "--log", (out / "runlog.csv").string(), "--suite", suite_path(), "--out",
                         again.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_file(out / "report.txt"), read_file(again / "report.txt"));
  EXPECT_EQ(read_file(out / "scores.json"), read_file(again / "scores.json"));
}

TEST(Cli, ScoreRejectsTruncatedLog) {
  const auto out = rbtest::fresh_dir("cli-trunc");
  const auto src = rbtest::source_dir() / "tests/fixtures";
  std::string csv = read_file(src / "runlog_rate.csv");
  csv.erase(csv.rfind('\n', csv.size() - 2) + 1);
  write_file(out / "runlog.csv", csv);
  fs::copy_file(src / "runlog_rate.json", out / "runlog.json");
  const auto r = invoke({"score", "--log", (out / "runlog.csv").string(), "--suite", suite_path(), "--out",
                         (out / "s").string()});
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, ScoreRejectsUnknownRoster) {
  const auto out = rbtest::fresh_dir("cli-roster");
  write_file(out / "runlog.csv",
             "copy,bench_id,workload,iteration,start_ns,end_ns,exit_ok,validation\n0,other,ref,1,0,5,true,pass\n");
  const auto r = invoke({"score", "--log", (out / "runlog.csv").string(), "--suite", suite_path(), "--out",
                         (out / "s").string()});
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, ScoreStoredFixture) {
  const auto out = rbtest::fresh_dir("cli-fixture");
  const auto src = rbtest::source_dir() / "tests/fixtures";
  const auto r = invoke({"score", "--log", (src / "runlog_rrr.csv").string(), "--suite", suite_path(), "--out",
                         out.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(out / "rrr_metrics.json"));
}

TEST(Cli, BbvIdenticalIntervalsAllBright) {
  const auto out = rbtest::fresh_dir("cli-bbv");
  write_file(out / "t.bb", "T:1:4 :7:2\nT:1:4 :7:2\n");
  const auto r = invoke({"bbv", "--trace", (out / "t.bb").string(), "--out", out.string(), "--format", "pgm,csv,svg"});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string pgm = read_file(out / "recurrence.pgm");
  EXPECT_EQ(pgm.substr(pgm.size() - 4), std::string(4, '\xff'));
  EXPECT_TRUE(fs::exists(out / "recurrence.svg"));
  EXPECT_TRUE(fs::exists(out / "distance.csv"));
}

TEST(Cli, BbvMalformedLineExitsTwoWithLineNumber) {
  const auto out = rbtest::fresh_dir("cli-bbv-bad");
  write_file(out / "t.bb", "T:1:4\nT:1:4\nT:zz\n");
  const auto r = invoke({"bbv", "--trace", (out / "t.bb").string(), "--out", out.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 3"), std::string::npos);
}

TEST(Cli, BbvLargeTrace) {
  const auto out = rbtest::fresh_dir("cli-bbv-large");
  std::mt19937_64 rng(43);
  const auto trace = rbtest::random_trace(rng, 500, 2000, 60);
  std::string text;
  for (const auto& iv : trace.intervals) {
    text += "T";
    for (const auto& [id, v] : iv.entries) text += ":" + std::to_string(id) + ":" + std::to_string(static_cast<long>(v)) + " ";
    text += "\n";
  }
  write_file(out / "big.bb", text);
  const auto t0 = std::chrono::steady_clock::now();
  EXPECT_EQ(invoke({"bbv", "--trace", (out / "big.bb").string(), "--out", out.string()}).code, 0);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 10.0);
}

TEST(Cli, PerfplotMismatchExitsTwo) {
  const auto out = rbtest::fresh_dir("cli-perf-mismatch");
  write_file(out / "s.csv", "instructions,cycles\n0,0\n1000,500\n");
  write_file(out / "t.bb", "T:1:1\nT:1:1\n");
  const auto r = invoke({"perfplot", "--samples", (out / "s.csv").string(), "--interval", "100", "--bbv",
                         (out / "t.bb").string(), "--out", out.string()});
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, PerfplotConstantStreamFlat) {
  const auto out = rbtest::fresh_dir("cli-perf-flat");
  write_file(out / "s.csv", "instructions,cycles\n0,0\n1000,500\n2000,1000\n");
  ASSERT_EQ(invoke({"perfplot", "--samples", (out / "s.csv").string(), "--interval", "250", "--out", out.string()}).code, 0);
  const auto csv = read_file(out / "series.csv");
  EXPECT_EQ(csv, "interval,ipc,frontend,badspec,retiring,backend\n"
                 "0,2.000000,,,,\n1,2.000000,,,,\n2,2.000000,,,,\n3,2.000000,,,,\n"
                 "4,2.000000,,,,\n5,2.000000,,,,\n6,2.000000,,,,\n7,2.000000,,,,\n");
  EXPECT_TRUE(fs::exists(out / "perf_overlay.svg"));
}

TEST(Cli, PerfplotTable4Echo) {
  const auto out = rbtest::fresh_dir("cli-perf-t4");
  const auto src = rbtest::source_dir() / "tests/fixtures";
  ASSERT_EQ(invoke({"perfplot", "--samples", (src / "table4_samples.csv").string(), "--interval", "1000000", "--out",
                    out.string()}).code, 0);
  const auto series = csv::parse(read_file(out / "series.csv"));
  const auto table = csv::parse(read_file(src / "topdown_tables.csv"));
  std::size_t row = 1;
  for (std::size_t t = 1; t < table.size(); ++t) {
    const auto& f = table[t].fields;
    if (f[0] != "intrate_stalls") continue;
    ASSERT_LT(row, series.size());
    const auto& s = series[row++].fields;
    EXPECT_NEAR(std::stod(s[1]), std::stod(f[2]), 0.005) << f[1];
    EXPECT_NEAR(std::stod(s[2]), std::stod(f[3]), 0.005) << f[1];
    EXPECT_NEAR(std::stod(s[3]), std::stod(f[5]), 0.005) << f[1];
    EXPECT_NEAR(std::stod(s[4]), std::stod(f[6]), 0.005) << f[1];
    EXPECT_NEAR(std::stod(s[5]), std::stod(f[4]), 0.02) << f[1];
  }
  EXPECT_EQ(row, series.size());
}

TEST(Cli, SynthSubcommand) {
  const auto out = rbtest::fresh_dir("cli-synth");
  EXPECT_EQ(invoke({"synth", "--kind", "stream", "--units", "1000", "--mib", "1", "--out", (out / "o.txt").string()}).code, 0);
  EXPECT_EQ(invoke({"synth", "--kind", "stream", "--units", "0", "--out", (out / "o.txt").string()}).code, 2);
  EXPECT_EQ(invoke({"synth", "--kind", "nope", "--units", "5", "--out", (out / "o.txt").string()}).code, 2);
}

TEST(Cli, CorruptedGoldenRunIsNonCompliant) {
  const auto dir = rbtest::fresh_dir("cli-noncompliant");
  const auto src = rbtest::source_dir() / "suites/synth";
  fs::create_directories(dir / "golden");
  for (const auto& e : fs::directory_iterator(src / "golden")) fs::copy_file(e.path(), dir / "golden" / e.path().filename());
  fs::copy_file(src / "synth.toml", dir / "synth.toml");
  write_file(dir / "golden/spin.txt", "# ratebench synthetic output v1\nkind spin\nunits 12000000\nchecksum 0\nmean 0\n");
  const auto r = invoke({"run", "--suite", (dir / "synth.toml").string(), "--out", (dir / "out").string(), "--harness",
                         rbtest::harness_path().string(), "--iterations", "1", "--benchmarks", "syn.spin"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(read_file(dir / "out/validation.json").find("\"reason\": \"text\""), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "out/report.txt"));
}
