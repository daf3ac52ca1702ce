#include <random>

#include <benchmark/benchmark.h>

#include "sympass/energy.hpp"
#include "sympass/minimax.hpp"
#include "sympass/rearrange.hpp"

using namespace sympass;

namespace {

GridFunction random_function(const Domain& d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  GridFunction u(d);
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] = unit(rng);
  }
  return u;
}

Domain domain_for(const benchmark::State& state) {
  return state.range(0) == 1 ? Domain(1, 8.0, 129) : Domain(2, 4.0, 33);
}

void BM_Polarize(benchmark::State& state) {
  const Domain d = domain_for(state);
  const GridFunction u = random_function(d, 1);
  const auto pool = compatible_polarizers(d);
  std::mt19937_64 rng(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(polarize(u, random_polarizer(pool, rng)));
  }
}
BENCHMARK(BM_Polarize)->Arg(1)->Arg(2);

void BM_Schwarz(benchmark::State& state) {
  const Domain d = domain_for(state);
  const GridFunction u = random_function(d, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(schwarz(u));
  }
}
BENCHMARK(BM_Schwarz)->Arg(1)->Arg(2);

void BM_GradientAndSlope(benchmark::State& state) {
  const LambdaFamily f(EnergySpec{}, domain_for(state));
  const GridFunction u = random_function(f.domain(), 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.slope(1.0, u));
  }
}
BENCHMARK(BM_GradientAndSlope)->Arg(1)->Arg(2);

void BM_GreedySymmetrization(benchmark::State& state) {
  const GridFunction u = random_function(Domain(1, 8.0, 65), 5);
  SymmetrizationConfig cfg;
  cfg.max_iterations = 50;
  for (auto _ : state) {
    benchmark::DoNotOptimize(approximate_symmetrization(u, cfg, 6));
  }
}
BENCHMARK(BM_GreedySymmetrization)->Unit(benchmark::kMillisecond);

void BM_DescendPath(benchmark::State& state) {
  const LambdaFamily f(EnergySpec{}, Domain(1, 8.0, 129));
  MinimaxConfig cfg;
  cfg.max_sweeps = static_cast<int>(state.range(0));
  const Path start = make_initial_path(f, 1.0, cfg, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(descend_path(f, 1.0, start, cfg));
  }
}
BENCHMARK(BM_DescendPath)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
