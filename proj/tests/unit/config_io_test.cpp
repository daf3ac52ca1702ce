#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "json.hpp"
#include "oracles/oracles.hpp"
#include "sympass/config.hpp"
#include "sympass/report_io.hpp"

using namespace sympass;

TEST(Config, EmptyDocumentGivesDefaults) {
  const RunConfig cfg = parse_config("{}");
  EXPECT_EQ(cfg.domain, Domain(1, 8.0, 129));
  EXPECT_EQ(cfg.energy.p, 2.0);
  EXPECT_EQ(cfg.energy.q, 4.0);
  EXPECT_EQ(cfg.scan.lambda_grid.size(), 8U);
  EXPECT_DOUBLE_EQ(cfg.scan.lambda_grid.front(), 0.5);
  EXPECT_DOUBLE_EQ(cfg.scan.lambda_grid.back(), 1.0);
  EXPECT_EQ(cfg.symmetrization.norm.pstar, 4.0);
  EXPECT_EQ(cfg.scan.seed, cfg.seed);
}

TEST(Config, OverridesPropagateToScan) {
  const RunConfig cfg = parse_config(R"({
    "seed": 42,
    "domain": {"points_per_axis": 65},
    "minimax": {"nodes": 33, "restarts": 2},
    "scan": {"lambda_grid": [0.5, 0.75, 1.0], "j_max": 3},
    "energy": {"kappa": {"kind": "exponential", "rate": 0.5}, "j": {"kind": "weighted_power", "gain": 0.25}}
  })");
  EXPECT_EQ(cfg.seed, 42U);
  EXPECT_EQ(cfg.scan.seed, 42U);
  EXPECT_EQ(cfg.domain.points_per_axis(), 65);
  EXPECT_EQ(cfg.scan.minimax.nodes, 33);
  EXPECT_EQ(cfg.scan.minimax.restarts, 2);
  EXPECT_EQ(cfg.scan.j_max, 3);
  EXPECT_EQ(cfg.energy.kappa_rate, 0.5);
  EXPECT_EQ(cfg.energy.kinetic, KineticKind::weighted_power);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW((void)parse_config(R"({"sede": 1})"), ConfigError);
  EXPECT_THROW((void)parse_config(R"({"scan": {"lambda_grid": []}})"), ConfigError);
  EXPECT_THROW((void)parse_config(R"({"scan": {"lambda_grid": [0.5, 0.5]}})"), ConfigError);
  EXPECT_THROW((void)parse_config(R"({"minimax": {"nodes": 1}})"), ConfigError);
  EXPECT_THROW((void)parse_config(R"({"energy": {"q": 1.5}})"), ConfigError);
  EXPECT_THROW((void)parse_config(R"({"energy": {"kappa": {"kind": "increasing"}}})"), ConfigError);
  EXPECT_THROW((void)parse_config(R"({"domain": {"points_per_axis": 64}})"), ConfigError);
  EXPECT_THROW((void)parse_config(R"({"seed": "abc"})"), ConfigError);
  EXPECT_THROW((void)parse_config("{not json"), ConfigError);
  EXPECT_THROW((void)load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, JsonRoundTrip) {
  const RunConfig a = parse_config(R"({"seed": 7, "scan": {"lambda_grid": [0.5, 1.0], "q_cap": 12}})");
  const RunConfig b = parse_config(to_json(a));
  EXPECT_EQ(to_json(a), to_json(b));
  EXPECT_EQ(b.scan.q_cap, 12.0);
}

TEST(FormatReal, RoundTripsAndNames) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> dist(-1e6, 1e6);
  for (int t = 0; t < 1000; ++t) {
    const double x = dist(rng) * std::pow(10.0, t % 20 - 10);
    EXPECT_EQ(std::stod(format_real(x)), x);
  }
  EXPECT_EQ(format_real(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(format_real(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(GridCsv, RoundTripExact) {
  std::mt19937_64 rng(10);
  for (int dim : {1, 2}) {
    const GridFunction u = oracle::random_function(Domain(dim, 2.5, 9), rng);
    std::stringstream buf;
    write_grid_function(buf, u);
    EXPECT_EQ(read_grid_function(buf), u);
  }
}

TEST(GridCsv, HeaderLayout) {
  std::stringstream buf;
  write_grid_function(buf, GridFunction(Domain(1, 1.0, 3), {0.0, 1.5, 0.0}));
  EXPECT_EQ(buf.str(), "dimension=1\nn=3\nL=1\n0\n1.5\n0\n");
}

TEST(GridCsv, MalformedInputRejected) {
  const auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_grid_function(in);
  };
  EXPECT_THROW((void)parse(""), ParseError);
  EXPECT_THROW((void)parse("n=3\ndimension=1\nL=1\n0\n0\n0\n"), ParseError);
  EXPECT_THROW((void)parse("dimension=1\nn=3\nL=1\n0\n0\n"), ParseError);
  EXPECT_THROW((void)parse("dimension=1\nn=3\nL=1\n0\nx\n0\n"), ParseError);
  EXPECT_THROW((void)parse("dimension=1\nn=4\nL=1\n0\n0\n0\n0\n"), ParseError);
  EXPECT_THROW((void)parse("dimension=1\nn=3\nL=1\n0\nnan\n0\n"), ParseError);
  EXPECT_NO_THROW((void)parse("dimension=1\r\nn=3\r\nL=1\r\n0\r\n1\r\n0\r\n"));
}

TEST(Reports, ScanCsvHasHeaderAndFailures) {
  ScanResult scan;
  ScanRow ok;
  ok.lambda = 0.5;
  ok.c = 2.5;
  ok.converged = true;
  ScanRow bad;
  bad.lambda = 0.75;
  bad.c = std::numeric_limits<double>::quiet_NaN();
  bad.failure = "no admissible endpoint";
  scan.rows = {ok, bad};
  std::stringstream csv;
  write_scan_csv(csv, scan);
  EXPECT_EQ(csv.str(), "lambda,c,converged,restarts_dispersion\n0.5,2.5,1,0\n0.75,nan,0,0\n");
  std::stringstream dat;
  write_scan_dat(dat, scan);
  EXPECT_EQ(dat.str(), "# lambda c\n0.5 2.5\n# 0.75 failed: no admissible endpoint\n");
}

TEST(Reports, PsReportJsonMarksInsufficientData) {
  PSReport rep;
  rep.lambda0 = 1.0;
  rep.denjoy_ok = true;
  SbpsRecord rec;
  rec.j = 1;
  rec.hash = "0123456789abcdef";
  rep.sequence.push_back(rec);
  const auto j = nlohmann::json::parse(ps_report_json(rep));
  EXPECT_EQ(j.at("decay_exponent"), "insufficient data");
  EXPECT_EQ(j.at("verdicts").at("asymmetry_decay"), "insufficient data");
  EXPECT_EQ(j.at("sequence").size(), 1U);
  std::stringstream summary;
  write_summary(summary, {rep}, nullptr);
  EXPECT_NE(summary.str().find("asymmetry decay: insufficient data"), std::string::npos);
}
