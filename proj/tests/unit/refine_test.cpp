#include <cmath>

#include <gtest/gtest.h>

#include "oracles/oracles.hpp"
#include "sympass/energy.hpp"
#include "sympass/minimax.hpp"
#include "sympass/rearrange.hpp"
#include "sympass/refine.hpp"

using namespace sympass;

namespace {

LambdaFamily default_model() { return LambdaFamily(EnergySpec{}, Domain(1, 8.0, 129)); }

double l2_relative(const GridFunction& u, const std::vector<double>& ref) {
  const GridFunction r(u.domain(), ref);
  return lp_norm(u - r, 2.0) / lp_norm(r, 2.0);
}

}  // namespace

TEST(Refine, GroundStateMatchesShooting) {
  const auto f = default_model();
  const auto gs = oracle::shooting_ground_state(1.0, 8.0, 129);
  GridFunction seed(f.domain(), gs.at_nodes);
  seed *= 1.05;
  const auto rec = refine_to_critical(f, 1.0, seed, VNorm{});
  ASSERT_TRUE(rec.converged) << rec.failure;
  EXPECT_LE(rec.slope, 1e-8);
  EXPECT_LE(rec.asymmetry, 1e-3);
  EXPECT_LE(l2_relative(rec.u, gs.at_nodes), 0.02);
  EXPECT_NEAR(rec.energy, gs.energy, 0.02 * gs.energy);
}

TEST(Refine, FromMountainPassHarvest) {
  const auto f = default_model();
  const MPEstimate est = mountain_pass_value(f, 0.8, {}, 1, 3);
  const auto rec =
      refine_to_critical(f, 0.8, schwarz(est.path.nodes[est.argmax_index]), VNorm{});
  ASSERT_TRUE(rec.converged) << rec.failure;
  EXPECT_LE(rec.slope, 1e-8);
  const auto gs = oracle::shooting_ground_state(0.8, 8.0, 129);
  EXPECT_LE(l2_relative(rec.u, gs.at_nodes), 0.02);
  // The refined point is a fixed point of the rearrangement and of iterated polarization.
  const auto sym = approximate_symmetrization(rec.u, {}, 1);
  EXPECT_LE(sym.distance_trace.back(), 1e-3);
}

TEST(Refine, CriticalSeedIsFixed) {
  const auto f = default_model();
  const auto gs = oracle::shooting_ground_state(1.0, 8.0, 129);
  const auto first = refine_to_critical(f, 1.0, GridFunction(f.domain(), gs.at_nodes), VNorm{});
  ASSERT_TRUE(first.converged);
  const auto again = refine_to_critical(f, 1.0, first.u, VNorm{});
  ASSERT_TRUE(again.converged);
  EXPECT_LE((again.u - first.u).max_abs(), 1e-12);
}

TEST(Refine, SurrogateSaddle) {
  const SurrogateFunctional f({0.25, 2.0});
  for (double lambda : {0.5, 1.0, 2.0}) {
    const auto rec = refine_to_critical(f, lambda, f.state(0.95 / std::sqrt(lambda)), VNorm{});
    ASSERT_TRUE(rec.converged) << rec.failure;
    EXPECT_LE(rec.slope, 1e-8);
    EXPECT_NEAR(f.coordinate(rec.u), 1.0 / std::sqrt(lambda), 1e-8);
    EXPECT_NEAR(rec.energy, 1.0 / (4.0 * lambda), 1e-12);
  }
}

TEST(Refine, RejectsSteepSeed) {
  const auto f = default_model();
  std::mt19937_64 rng(8);
  const GridFunction u = oracle::random_function(f.domain(), rng, -3.0, 3.0);
  ASSERT_GT(f.slope(1.0, u), 1.0);
  const auto rec = refine_to_critical(f, 1.0, u, VNorm{});
  EXPECT_FALSE(rec.converged);
  EXPECT_EQ(rec.failure, "seed slope above threshold");
  EXPECT_EQ(rec.iterations, 0);
}

TEST(Refine, BudgetExhaustion) {
  const auto f = default_model();
  const auto gs = oracle::shooting_ground_state(1.0, 8.0, 129);
  GridFunction seed(f.domain(), gs.at_nodes);
  seed *= 1.2;
  RefineTolerances tol;
  tol.max_iterations = 1;
  tol.slope = 1e-14;
  const auto rec = refine_to_critical(f, 1.0, seed, VNorm{}, tol);
  EXPECT_FALSE(rec.converged);
  EXPECT_FALSE(rec.failure.empty());
}
