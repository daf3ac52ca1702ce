#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>

#include <gtest/gtest.h>

#include "sympass/energy.hpp"
#include "sympass/trick.hpp"

using namespace sympass;

namespace {

ScanConfig grid_config(std::vector<double> grid) {
  ScanConfig cfg;
  cfg.lambda_grid = std::move(grid);
  cfg.lambda0 = {cfg.lambda_grid.back()};
  return cfg;
}

ScanResult table(const std::vector<double>& lambdas, const std::vector<double>& cs) {
  ScanResult scan;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    ScanRow row;
    row.lambda = lambdas[k];
    row.c = cs[k];
    row.converged = true;
    scan.rows.push_back(row);
  }
  return scan;
}

LambdaFamily small_model() { return LambdaFamily(EnergySpec{}, Domain(1, 8.0, 65)); }

}  // namespace

TEST(ScanConfig, Preconditions) {
  const SurrogateFunctional f({0.25, 2.0});
  ScanConfig cfg = grid_config({0.5, 0.5, 1.0});
  try {
    cfg.validate(f);
    FAIL() << "expected a precondition error";
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "grid not strictly increasing");
  }
  cfg = grid_config({0.5, 1.0});
  cfg.lambda_grid.clear();
  EXPECT_THROW(cfg.validate(f), std::invalid_argument);
  cfg = grid_config({0.5, 3.0});
  EXPECT_THROW(cfg.validate(f), std::invalid_argument);
  cfg = grid_config({0.5, 1.0});
  cfg.quotient_window = 1;
  EXPECT_THROW(cfg.validate(f), std::invalid_argument);
  cfg = grid_config({0.5, 1.0});
  cfg.j_max = 0;
  EXPECT_THROW(cfg.validate(f), std::invalid_argument);
}

TEST(Scan, SurrogateQuotientsMatchClosedForm) {
  const SurrogateFunctional f({0.25, 2.0});
  const ScanConfig cfg = grid_config({0.5, 0.75, 1.0, 1.5, 2.0});
  const ScanResult scan = scan_c(f, cfg, 2);
  EXPECT_TRUE(scan.monotone);
  ASSERT_EQ(scan.rows.size(), 5U);
  for (const auto& row : scan.rows) {
    EXPECT_NEAR(row.c, 1.0 / (4.0 * row.lambda), 1e-3);
  }
  ASSERT_EQ(scan.quotients.size(), 4U);
  for (const auto& q : scan.quotients) {
    const double analytic = 1.0 / (4.0 * q.lambda_h * q.lambda0);
    EXPECT_NEAR(q.quotient, analytic, 0.05 * analytic + 4e-3 / (q.lambda0 - q.lambda_h));
  }
}

TEST(Scan, IndependentOfWorkerCount) {
  const SurrogateFunctional f({0.25, 2.0});
  const ScanConfig cfg = grid_config({0.5, 1.0, 2.0});
  const ScanResult a = scan_c(f, cfg, 1);
  const ScanResult b = scan_c(f, cfg, 3);
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    EXPECT_EQ(a.rows[k].c, b.rows[k].c);
  }
}

TEST(Scan, OdeModelIsMonotone) {
  const auto f = small_model();
  ScanConfig cfg;
  for (int k = 0; k < 8; ++k) {
    cfg.lambda_grid.push_back(0.5 + 0.5 * k / 7.0);
  }
  const ScanResult scan = scan_c(f, cfg, 2);
  EXPECT_TRUE(scan.monotone);
  for (std::size_t k = 1; k < scan.rows.size(); ++k) {
    EXPECT_LE(scan.rows[k].c, scan.rows[k - 1].c + scan.tolerance);
  }
}

TEST(Denjoy, SmoothDecreasingTableSelectsAllWithWindow) {
  std::vector<double> l;
  std::vector<double> c;
  for (int k = 0; k < 8; ++k) {
    l.push_back(0.5 + 0.5 * k / 7.0);
    c.push_back(1.0 / l.back());
  }
  ScanConfig cfg = grid_config(l);
  cfg.quotient_window = 3;
  const auto pts = select_denjoy_points(table(l, c), cfg);
  ASSERT_EQ(pts.size(), 5U);
  EXPECT_EQ(pts.front().lambda0, l[3]);
  // The largest left quotient of 1/lambda at lambda0 comes from the farthest point in the window.
  EXPECT_NEAR(pts.front().q_witness, 1.0 / (l[0] * l[3]), 1e-12);
}

TEST(Denjoy, ConstantTableHasZeroWitness) {
  const std::vector<double> l{0.5, 0.6, 0.7, 0.8};
  ScanConfig cfg = grid_config(l);
  cfg.quotient_window = 2;
  const auto pts = select_denjoy_points(table(l, {1.0, 1.0, 1.0, 1.0}), cfg);
  ASSERT_EQ(pts.size(), 2U);
  for (const auto& p : pts) {
    EXPECT_EQ(p.q_witness, 0.0);
  }
}

TEST(Denjoy, JumpIsExcluded) {
  const std::vector<double> l{0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  const std::vector<double> c{2.0, 1.9, 1.8, 0.5, 0.45, 0.4};
  ScanConfig cfg = grid_config(l);
  cfg.quotient_window = 2;
  cfg.q_cap = 5.0;
  const auto pts = select_denjoy_points(table(l, c), cfg);
  for (const auto& p : pts) {
    EXPECT_NE(p.lambda0, 0.8);
    EXPECT_NE(p.lambda0, 0.9);
  }
  ASSERT_FALSE(pts.empty());
  EXPECT_EQ(pts.back().lambda0, 1.0);
}

TEST(Denjoy, FailedRowsAreSkipped) {
  const std::vector<double> l{0.5, 0.6, 0.7, 0.8};
  ScanConfig cfg = grid_config(l);
  cfg.quotient_window = 2;
  const auto pts = select_denjoy_points(table(l, {1.0, std::nan(""), 0.9, 0.8}), cfg);
  ASSERT_EQ(pts.size(), 1U);
  EXPECT_EQ(pts[0].lambda0, 0.8);
}

TEST(Ladder, DyadicBelowLambda0) {
  EXPECT_EQ(lambda_ladder(1.0, 4, 0.25), (std::vector<double>{0.5, 0.75, 0.875, 0.9375}));
  EXPECT_EQ(lambda_ladder(0.5, 3, 0.25), (std::vector<double>{0.25, 0.375, 0.4375}));
  EXPECT_EQ(lambda_ladder(0.6, 2, 0.25), (std::vector<double>{0.35, 0.475}));
}

TEST(LogLog, ExactPowerLaw) {
  const std::vector<double> x{1, 2, 4, 8, 16};
  std::vector<double> y;
  for (double v : x) {
    y.push_back(3.0 / std::sqrt(v));
  }
  EXPECT_NEAR(*loglog_slope(x, y), -0.5, 1e-12);
  EXPECT_FALSE(loglog_slope({1, 2}, {1, 0.5}).has_value());
  EXPECT_FALSE(loglog_slope({1, 2, 3}, {1, 0.0, 0.5}).has_value());
}

TEST(Hash, StableAndSensitive) {
  GridFunction u(Domain(1, 1.0, 3), {0.0, 1.0, 0.0});
  const std::string h = function_hash(u);
  EXPECT_EQ(h.size(), 16U);
  EXPECT_EQ(h, function_hash(u));
  u[1] = std::nextafter(1.0, 2.0);
  EXPECT_NE(h, function_hash(u));
}

TEST(ParallelFor, FirstFailureByIndexIsRethrown) {
  std::atomic<int> ran{0};
  try {
    parallel_for(10, 4, [&](std::size_t i) {
      ++ran;
      if (i == 3 || i == 7) {
        throw std::runtime_error(std::to_string(i));
      }
    });
    FAIL() << "expected a rethrow";
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "3");
  }
  EXPECT_EQ(ran.load(), 10);
}

TEST(Sbps, SingleStepHasInsufficientData) {
  const auto f = small_model();
  ScanConfig cfg;
  cfg.j_max = 1;
  const PSReport rep = extract_sbps(f, 1.0, lambda_ladder(1.0, 3, 0.25), cfg);
  ASSERT_TRUE(rep.denjoy_ok);
  ASSERT_EQ(rep.sequence.size(), 1U);
  EXPECT_FALSE(rep.decay_exponent.has_value());
  EXPECT_FALSE(rep.verdicts.asymmetry_decay.has_value());
  EXPECT_EQ(rep.harvested.size(), 1U);
  EXPECT_NEAR(rep.omega, (rep.c_estimate - rep.a0) / 4.0, 1e-15);
  EXPECT_GT(rep.omega, 0.0);
}

TEST(Sbps, SymmetricDataStaysSymmetric) {
  const auto f = small_model();
  ScanConfig cfg;
  cfg.j_max = 1;
  cfg.minimax.perturbation = 0.0;
  const PSReport rep = extract_sbps(f, 1.0, lambda_ladder(1.0, 3, 0.25), cfg);
  ASSERT_EQ(rep.sequence.size(), 1U);
  EXPECT_LE(rep.sequence[0].asymmetry, 1e-3);
}

TEST(Sbps, ShortRunVerdictsAndDeterminism) {
  const auto f = small_model();
  ScanConfig cfg;
  cfg.j_max = 4;
  const auto ladder = lambda_ladder(1.0, 3, 0.25);
  const PSReport a = extract_sbps(f, 1.0, ladder, cfg);
  const PSReport b = extract_sbps(f, 1.0, ladder, cfg);
  ASSERT_EQ(a.sequence.size(), 4U);
  for (std::size_t k = 0; k < a.sequence.size(); ++k) {
    EXPECT_EQ(a.sequence[k].hash, b.sequence[k].hash);
    EXPECT_EQ(a.sequence[k].energy, b.sequence[k].energy);
  }
  EXPECT_TRUE(a.verdicts.energies_in_band);
  EXPECT_TRUE(a.verdicts.bounded);
  for (const auto& r : a.sequence) {
    if (r.accepted) {
      EXPECT_LE(std::abs(r.energy - a.c_estimate), 2.0 / r.j);
      EXPECT_LE(r.xnorm, a.norm_bound + 2.0);
    }
  }
}

TEST(Sbps, RejectsBadLadder) {
  const auto f = small_model();
  EXPECT_THROW((void)extract_sbps(f, 1.0, {0.75, 0.5}, ScanConfig{}), std::invalid_argument);
  EXPECT_THROW((void)extract_sbps(f, 0.75, {0.5, 0.875}, ScanConfig{}), std::invalid_argument);
}

TEST(Corollary, RejectsNonIncreasingSequence) {
  const auto f = small_model();
  try {
    (void)corollary_sequence(f, std::vector<double>{0.6, 0.5}, CorollaryConfig{}, ScanConfig{});
    FAIL() << "expected a precondition error";
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "lambda sequence not increasing");
  }
}

TEST(Corollary, TwoPointSequenceRefines) {
  const auto f = small_model();
  CorollaryConfig cc;
  cc.j_max = 2;
  const CorollaryReport rep = corollary_sequence(f, std::vector<double>{0.75, 1.0}, cc, ScanConfig{});
  ASSERT_EQ(rep.records.size(), 2U);
  EXPECT_TRUE(rep.all_refined);
  EXPECT_TRUE(rep.all_symmetric);
  EXPECT_TRUE(std::isfinite(rep.sup_norm));
  for (const auto& r : rep.records) {
    EXPECT_LE(r.slope, 1e-8);
    EXPECT_LE(r.asymmetry, 1e-3);
    EXPECT_LE(f.xnorm(r.u), rep.sup_norm);
  }
  // Energies of the refined ground states decrease with lambda.
  EXPECT_GT(rep.records[0].energy, rep.records[1].energy);
}
