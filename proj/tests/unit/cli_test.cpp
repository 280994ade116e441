#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(DTSIM_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("dtsim_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
  const std::string scenario_ = std::string(DTSIM_SCENARIO_DIR) + "/default.cfg";
};

}  // namespace

TEST_F(Cli, ValidateGoodAndBad) {
  EXPECT_EQ(run_cli("validate " + scenario_), 0);
  const auto bad = write("bad.cfg", "[workload]\nmix_local = 0.9\nmix_edge = 0.3\nmix_cloud = 0.2\n");
  EXPECT_EQ(run_cli("validate " + bad.string()), 1);
  const auto typo = write("typo.cfg", "[simulation]\nsead = 4\n");
  EXPECT_EQ(run_cli("validate " + typo.string()), 1);
}

TEST_F(Cli, UsageErrorsAreValidationErrors) {
  EXPECT_EQ(run_cli("run --deployment hybrid"), 1);
  EXPECT_EQ(run_cli("frobnicate"), 1);
}

TEST_F(Cli, MissingScenarioIsIoError) { EXPECT_EQ(run_cli("validate " + (dir_ / "nope.cfg").string()), 2); }

TEST_F(Cli, UnwritableOutputIsRuntimeError) {
  const auto blocker = write("blocker", "x");
  EXPECT_EQ(run_cli("run --duration 2 --out " + (blocker / "sub").string()), 2);
}

TEST_F(Cli, CalibrateFeasibleAndInfeasible) {
  const auto frag = dir_ / "frag.cfg";
  EXPECT_EQ(run_cli("calibrate --out " + frag.string()), 0);
  EXPECT_NE(slurp(frag).find("[workload]"), std::string::npos);
  EXPECT_EQ(run_cli("calibrate --multilayer-band 0.001 0.002"), 3);
}

TEST_F(Cli, CalibrateNeverOverwritesItsInput) {
  const auto input = write("in.cfg", "[simulation]\nseed = 3\n");
  const std::string before = slurp(input);
  EXPECT_NE(run_cli("calibrate --scenario " + input.string() + " --out " + input.string()), 0);
  EXPECT_EQ(slurp(input), before);
}

TEST_F(Cli, CalibrateFullOutputIsALoadableScenario) {
  const auto full = dir_ / "full.cfg";
  ASSERT_EQ(run_cli("calibrate --full --out " + full.string()), 0);
  EXPECT_EQ(run_cli("validate " + full.string()), 0);
}

TEST_F(Cli, RunBothWritesFiveFiles) {
  const auto out = dir_ / "results";
  ASSERT_EQ(run_cli("run --scenario " + scenario_ + " --deployment both --duration 10 --out " + out.string()), 0);
  for (const char* f : {"centralized.records.csv", "multilayer.records.csv", "centralized.summary.json",
                        "multilayer.summary.json", "comparison.json"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  std::size_t n = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(out)) ++n;
  EXPECT_EQ(n, 5u);
  auto summary = nlohmann::json::parse(slurp(out / "multilayer.summary.json"));
  EXPECT_EQ(summary["mode"], "multilayer");
  EXPECT_EQ(summary["status"], "ok");
  EXPECT_EQ(summary["duration_s"], 10.0);
  EXPECT_EQ(summary["per_second_latency_s"].size(), 10u);
  auto cmp = nlohmann::json::parse(slurp(out / "comparison.json"));
  EXPECT_GT(cmp["latency_delta_s"].get<double>(), 0.0);
}

TEST_F(Cli, JsonFormat) {
  const auto out = dir_ / "json";
  ASSERT_EQ(run_cli("run --deployment centralized --format json --duration 5 --out " + out.string()), 0);
  auto recs = nlohmann::json::parse(slurp(out / "centralized.records.json"));
  ASSERT_TRUE(recs.is_array());
  for (const auto& r : recs) EXPECT_EQ(r["serving_layer"], "cloud");
}

TEST_F(Cli, SameSeedSameBytes) {
  const auto a = dir_ / "a";
  const auto b = dir_ / "b";
  const std::string common = "run --scenario " + scenario_ + " --deployment both --seed 7 --duration 20 --out ";
  ASSERT_EQ(run_cli(common + a.string()), 0);
  ASSERT_EQ(run_cli(common + b.string()), 0);
  for (const auto& e : fs::directory_iterator(a)) {
    EXPECT_EQ(slurp(e.path()), slurp(b / e.path().filename())) << e.path().filename();
  }
}
