#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "sympass/grid.hpp"
#include "sympass/report_io.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("sympass-cli-") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Outcome run(const std::string& args, const std::string& out_dir) const {
    const fs::path log = dir_ / "stdout.txt";
    const std::string cmd = "SYMPASS_OUTPUT='" + out_dir + "' '" SYMPASS_CLI_PATH "' " + args + " > '" +
                            log.string() + "' 2>&1";
    const int status = std::system(cmd.c_str());
    Outcome r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(log);
    return r;
  }

  Outcome run(const std::string& args) const { return run(args, (dir_ / "out").string()); }

  fs::path write(const std::string& name, const std::string& text) const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }

  fs::path dir_;
};

const char* kSmallTrick = R"({
  "domain": {"points_per_axis": 65},
  "scan": {"lambda_grid": [0.5, 0.75, 1.0], "j_max": 2},
  "corollary": {"points": 2, "j_max": 1}
})";

}  // namespace

TEST_F(Cli, MissingSubcommandIsUsageError) { EXPECT_EQ(run("").code, 2); }

TEST_F(Cli, UnknownFlagIsUsageError) { EXPECT_EQ(run("scan --bogus").code, 2); }

TEST_F(Cli, SymmetrizeSymmetricInput) {
  std::ostringstream text;
  text << "dimension=1\nn=33\nL=4\n";
  for (int i = 0; i < 33; ++i) {
    const double x = -4.0 + 0.25 * i;
    text << sympass::format_real(std::exp(-x * x)) << '\n';
  }
  const fs::path input = write("u.csv", text.str());
  const Outcome r = run("symmetrize '" + input.string() + "'");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(slurp(dir_ / "out" / "word.csv"), "step,a0,a1,twice_offset\n");
  EXPECT_EQ(slurp(dir_ / "out" / "distance_trace.csv"), "iteration,distance\n0,0\n");
  std::ifstream star(dir_ / "out" / "u_star.csv");
  EXPECT_EQ(sympass::read_grid_function(star).size(), 33U);
}

TEST_F(Cli, SymmetrizeRandomInputHasMonotoneTrace) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::ostringstream text;
  text << "dimension=1\nn=65\nL=8\n";
  for (int i = 0; i < 65; ++i) {
    text << sympass::format_real(unit(rng)) << '\n';
  }
  const fs::path input = write("u.csv", text.str());
  const Outcome r = run("symmetrize '" + input.string() + "' --seed 3");
  ASSERT_EQ(r.code, 0) << r.out;
  std::ifstream trace(dir_ / "out" / "distance_trace.csv");
  std::string line;
  std::getline(trace, line);
  EXPECT_EQ(line, "iteration,distance");
  double prev = INFINITY;
  int rows = 0;
  while (std::getline(trace, line)) {
    const double d = std::stod(line.substr(line.find(',') + 1));
    EXPECT_LE(d, prev);
    prev = d;
    ++rows;
  }
  EXPECT_GT(rows, 1);
}

TEST_F(Cli, SymmetrizeMalformedCsvExitsTwo) {
  const fs::path input = write("bad.csv", "dimension=1\nn=3\nL=1\n0\nfoo\n0\n");
  const Outcome r = run("symmetrize '" + input.string() + "'");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("not a number"), std::string::npos) << r.out;
}

TEST_F(Cli, EmptyLambdaGridExitsTwo) {
  const fs::path cfg = write("cfg.json", R"({"scan": {"lambda_grid": []}})");
  const Outcome r = run("scan --config '" + cfg.string() + "'");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("empty lambda grid"), std::string::npos) << r.out;
}

TEST_F(Cli, UnknownConfigKeyExitsTwo) {
  const fs::path cfg = write("cfg.json", R"({"scan": {"lamda_grid": [0.5]}})");
  EXPECT_EQ(run("scan --config '" + cfg.string() + "'").code, 2);
}

TEST_F(Cli, SurrogateScanMatchesClosedForm) {
  const fs::path cfg = write("cfg.json", R"({"scan": {"lambda_grid": [0.5, 0.75, 1.0]}})");
  const Outcome r = run("scan --surrogate --config '" + cfg.string() + "'");
  ASSERT_EQ(r.code, 0) << r.out;
  std::ifstream csv(dir_ / "out" / "c_of_lambda.csv");
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "lambda,c,converged,restarts_dispersion");
  int rows = 0;
  while (std::getline(csv, line)) {
    std::istringstream fields(line);
    std::string lambda;
    std::string c;
    std::getline(fields, lambda, ',');
    std::getline(fields, c, ',');
    EXPECT_NEAR(std::stod(c), 1.0 / (4.0 * std::stod(lambda)), 1e-3);
    ++rows;
  }
  EXPECT_EQ(rows, 3);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "c_of_lambda.dat"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "quotients.csv"));
}

TEST_F(Cli, ScanRerunIsByteIdentical) {
  const fs::path cfg = write("cfg.json", R"({"scan": {"lambda_grid": [0.5, 1.0]}})");
  ASSERT_EQ(run("scan --surrogate --config '" + cfg.string() + "'", (dir_ / "a").string()).code, 0);
  ASSERT_EQ(run("scan --surrogate --jobs 2 --config '" + cfg.string() + "'", (dir_ / "b").string()).code, 0);
  EXPECT_EQ(slurp(dir_ / "a" / "c_of_lambda.csv"), slurp(dir_ / "b" / "c_of_lambda.csv"));
}

TEST_F(Cli, TrickIsDeterministic) {
  const fs::path cfg = write("cfg.json", kSmallTrick);
  const Outcome a = run("trick --config '" + cfg.string() + "'", (dir_ / "a").string());
  ASSERT_EQ(a.code, 0) << a.out;
  const Outcome b = run("trick --jobs 2 --config '" + cfg.string() + "'", (dir_ / "b").string());
  ASSERT_EQ(b.code, 0) << b.out;
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(dir_ / "a")) {
    EXPECT_EQ(slurp(entry.path()), slurp(dir_ / "b" / entry.path().filename())) << entry.path();
    ++compared;
  }
  EXPECT_GE(compared, 5);
  const std::string summary = slurp(dir_ / "a" / "summary.txt");
  EXPECT_NE(summary.find("lambda0=1 "), std::string::npos);
  EXPECT_NE(summary.find("corollary refined to critical points"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "a" / "ps_report_0.json"));
  EXPECT_TRUE(fs::exists(dir_ / "a" / "critical_point_1.csv"));
}

TEST_F(Cli, TrickSingleStepReportsInsufficientData) {
  const fs::path cfg = write("cfg.json", R"({
    "domain": {"points_per_axis": 65},
    "scan": {"lambda_grid": [0.5, 1.0], "j_max": 1},
    "corollary": {"enabled": false}
  })");
  const Outcome r = run("trick --config '" + cfg.string() + "'");
  ASSERT_EQ(r.code, 0) << r.out;
  const std::string summary = slurp(dir_ / "out" / "summary.txt");
  EXPECT_NE(summary.find("asymmetry decay: insufficient data"), std::string::npos) << summary;
  EXPECT_NE(slurp(dir_ / "out" / "ps_report_0.json").find("\"insufficient data\""), std::string::npos);
}

TEST_F(Cli, SeedChangeKeepsVerdicts) {
  const fs::path cfg = write("cfg.json", kSmallTrick);
  ASSERT_EQ(run("trick --seed 1 --config '" + cfg.string() + "'", (dir_ / "a").string()).code, 0);
  ASSERT_EQ(run("trick --seed 2 --config '" + cfg.string() + "'", (dir_ / "b").string()).code, 0);
  EXPECT_NE(slurp(dir_ / "a" / "sbps.csv"), slurp(dir_ / "b" / "sbps.csv"));
  const auto verdicts = [](const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> out;
    while (std::getline(in, line)) {
      if (line.find("PASS") != std::string::npos || line.find("FAIL") != std::string::npos) {
        out.push_back(line.substr(line.rfind(' ') + 1));
      }
    }
    return out;
  };
  EXPECT_EQ(verdicts(slurp(dir_ / "a" / "summary.txt")), verdicts(slurp(dir_ / "b" / "summary.txt")));
}

TEST_F(Cli, CheckPassesOnDefaultModel) {
  const fs::path cfg = write("cfg.json", R"({"domain": {"points_per_axis": 65}})");
  const Outcome r = run("check --config '" + cfg.string() + "'");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << r.out;
  EXPECT_TRUE(fs::exists(dir_ / "out" / "check.txt"));
}
