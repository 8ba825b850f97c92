#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ics/weights.hpp"

namespace {

void BM_ProjectToSimplex(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> dist;
  std::vector<double> v(static_cast<std::size_t>(state.range(0)));
  for (auto& x : v) x = dist(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ics::project_to_simplex(v));
  }
}
BENCHMARK(BM_ProjectToSimplex)->Arg(3)->Arg(6)->Arg(64);

void BM_SolveWeights(benchmark::State& state) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> dist(0.0, 11.09);
  std::vector<double> d(static_cast<std::size_t>(state.range(0)));
  for (auto& x : d) x = dist(rng);
  ics::WeightSolverConfig cfg;
  cfg.gradient_mode = state.range(1) ? ics::GradientMode::exact
                                     : ics::GradientMode::paper;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ics::solve_weights(d, cfg));
  }
}
BENCHMARK(BM_SolveWeights)->Args({3, 0})->Args({3, 1})->Args({6, 1});

}  // namespace
