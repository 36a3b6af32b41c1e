#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "procnet/csv.hpp"
#include "support/fixtures.hpp"

namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
};

// Runs the CLI through the shell; stderr is discarded unless redirected in args.
Result run(const std::string& args) {
  const std::string cmd = std::string(PROCNET_CLI) + " " + args;
  Result r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("procnet_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    write("uniform.cfg",
          "n_issuers = 150\nn_winners = 300\np_intra = 0.04\np_inter = 0.04\nweight_law = constant:2\n"
          "risk_regime = uniform:0.2\n");
    write("m.csv",
          "contract_id,country,year,issuer_raw,winner_raw,cpv,bids\n"
          "1,HU,2014,City of A,ACME Kft.,45000000,1\n"
          "2,HU,2014,City of A,Acme KFT,45000000,3\n"
          "3,HU,2015,City of B,Beta Zrt.,33000000,1\n"
          "4,PL,2014,Gmina C,Budimex Sp. z o.o.,45000000,2\n");
  }
  void TearDown() override { fs::remove_all(dir_); }

  void write(const std::string& name, const std::string& text) { std::ofstream(dir_ / name) << text; }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(Cli, UsageErrorsExitTwo) {
  auto r = run("stats --bogus-flag 2>&1");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("Usage"), std::string::npos);
  EXPECT_EQ(run("null --input " + path("m.csv") + " 2>/dev/null").code, 2);  // --seed is mandatory
  EXPECT_EQ(run("synth 2>/dev/null").code, 2);
  EXPECT_EQ(run("2>/dev/null").code, 2);
}

TEST_F(Cli, DataErrorsExitOne) {
  EXPECT_EQ(run("stats --input " + path("missing.csv") + " 2>/dev/null").code, 1);
  write("bad.csv", "a,b\n1,2\n");
  EXPECT_EQ(run("stats --input " + path("bad.csv") + " 2>/dev/null").code, 1);
}

TEST_F(Cli, StatsSingleMarket) {
  auto r = run("stats --input " + path("m.csv") + " --country HU --years 2014:2014");
  ASSERT_EQ(r.code, 0);
  auto rows = procnet::csv::parse(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].fields[0], "HU");
  EXPECT_EQ(rows[1].fields[1], "2014");
  EXPECT_EQ(rows[1].fields[2], "2");
}

TEST_F(Cli, IngestWritesCanonicalFilesAndManifest) {
  auto r = run("ingest --input " + path("m.csv") + " --out " + path("ing") + " 2>/dev/null");
  ASSERT_EQ(r.code, 0);
  for (const char* f : {"contracts.csv", "entity_map.csv", "rejected.csv", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(dir_ / "ing" / f)) << f;
  }
  auto contracts = procnet::csv::parse(procnet::test::read_file(path("ing/contracts.csv")));
  ASSERT_EQ(contracts.size(), 5u);
  EXPECT_EQ(contracts[1].fields[9], contracts[2].fields[9]);  // ACME variants merged
  auto manifest = nlohmann::json::parse(procnet::test::read_file(path("ing/manifest.json")));
  EXPECT_EQ(manifest["command"], "ingest");
  EXPECT_EQ(manifest["parameters"]["summary.winners_after"], "3");
  EXPECT_EQ(manifest["input_hashes"].size(), 1u);
}

TEST_F(Cli, NullIsReproducible) {
  ASSERT_EQ(run("synth --config " + path("uniform.cfg") + " --seed 3 > " + path("s.csv")).code, 0);
  auto a = run("null --input " + path("s.csv") + " --statistic cv,global_sb --reps 100 --seed 7");
  auto b = run("null --input " + path("s.csv") + " --statistic cv,global_sb --reps 100 --seed 7");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST_F(Cli, SynthPipedIntoNullCvIsNearOne) {
  auto r = run("synth --config " + path("uniform.cfg") + " --seed 3 | " + PROCNET_CLI +
               " null --statistic cv --reps 200 --seed 1");
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["ratio"].get<double>(), 1.0, 0.2);
}

TEST_F(Cli, UndefinedStatisticIsNotedPerMarket) {
  ASSERT_EQ(run("synth --config " + path("uniform.cfg") + " --seed 3 > " + path("s.csv")).code, 0);
  // A uniform random market has no core, so core_sb is not evaluable.
  auto r = run("null --input " + path("s.csv") + " --statistic core_sb,global_sb --reps 10 --seed 1 --out " +
               path("n") + " 2>/dev/null");
  ASSERT_EQ(r.code, 0);
  auto manifest = nlohmann::json::parse(procnet::test::read_file(path("n/manifest.json")));
  EXPECT_TRUE(manifest["omitted"].contains("null_core_sb_XX_2014.json"));
  EXPECT_TRUE(fs::exists(dir_ / "n" / "null_global_sb_XX_2014.json"));
}

TEST_F(Cli, ReportHonoursDisabledSteps) {
  ASSERT_EQ(run("synth --config " + path("uniform.cfg") + " --seed 3 > " + path("s.csv")).code, 0);
  auto r = run("report --input " + path("s.csv") + " --seed 2 --no-null --out " + path("r") + " 2>/dev/null");
  ASSERT_EQ(r.code, 0);
  EXPECT_FALSE(fs::exists(dir_ / "r" / "core_sb_null.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "r" / "modularity.csv"));
  EXPECT_EQ(run("report --input " + path("s.csv") + " --seed 2 2>/dev/null").code, 2);  // --out is mandatory
}

}  // namespace
