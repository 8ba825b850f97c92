#include "ics/weights.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "ics/error.hpp"
#include "oracles.hpp"

namespace ics {
namespace {

constexpr double kLog2 = 0.69314718055994530942;

double simplex_sum(const std::vector<double>& w) {
  return std::accumulate(w.begin(), w.end(), 0.0);
}

// F written out independently of the library.
double reference_objective(const std::vector<double>& w,
                           const std::vector<double>& d, double beta,
                           double lambda) {
  double omega = 0.0, ent = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    omega += w[j] * d[j];
    const double wj = std::max(w[j], 1e-8);
    ent += wj * std::log(wj);
  }
  return std::log1p(std::exp(beta * omega)) + lambda * ent;
}

TEST(ProjectToSimplex, Examples) {
  const auto a = project_to_simplex(std::vector<double>{0.5, 0.5, 0.5});
  for (double x : a) EXPECT_NEAR(x, 1.0 / 3.0, 1e-15);

  const auto b = project_to_simplex(std::vector<double>{1.2, 0.1});
  EXPECT_NEAR(b[0], 1.0, 1e-15);
  EXPECT_EQ(b[1], 0.0);
  // Hand trace: rho = 1, xi = -0.2. Grid oracle agrees.
  const auto grid = oracle::grid_minimize_simplex(
      [](const std::vector<double>& w) {
        return 0.5 * ((w[0] - 1.2) * (w[0] - 1.2) + (w[1] - 0.1) * (w[1] - 0.1));
      },
      2);
  EXPECT_NEAR(grid[0], 1.0, 1e-3);
  EXPECT_NEAR(grid[1], 0.0, 1e-3);

  const auto c = project_to_simplex(std::vector<double>{0.7, 0.2, 0.1});
  EXPECT_NEAR(c[0], 0.7, 1e-15);
  EXPECT_NEAR(c[1], 0.2, 1e-15);
  EXPECT_NEAR(c[2], 0.1, 1e-15);
}

TEST(ProjectToSimplex, Errors) {
  EXPECT_THROW(project_to_simplex(std::vector<double>{}), ArgumentError);
  EXPECT_THROW(project_to_simplex(std::vector<double>{
                   1.0, std::numeric_limits<double>::quiet_NaN()}),
               ArgumentError);
  EXPECT_THROW(project_to_simplex(std::vector<double>{
                   std::numeric_limits<double>::infinity()}),
               ArgumentError);
}

TEST(ProjectToSimplex, MatchesSupportEnumeration) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  std::uniform_int_distribution<int> dim(1, 6);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> v(static_cast<std::size_t>(dim(rng)));
    for (auto& x : v) x = val(rng);
    const auto w = project_to_simplex(v);
    const auto ref = oracle::projection_by_support_enumeration(v);
    ASSERT_EQ(w.size(), ref.size());
    EXPECT_NEAR(simplex_sum(w), 1.0, 1e-9);
    for (std::size_t j = 0; j < w.size(); ++j) {
      EXPECT_GE(w[j], 0.0);
      EXPECT_NEAR(w[j], ref[j], 1e-12);
    }
  }
}

TEST(ProjectToSimplex, MatchesGridOracle) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> val(-1.0, 1.5);
  std::uniform_int_distribution<int> dim(2, 4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(static_cast<std::size_t>(dim(rng)));
    for (auto& x : v) x = val(rng);
    const auto w = project_to_simplex(v);
    const auto grid = oracle::grid_minimize_simplex(
        [&](const std::vector<double>& p) {
          double s = 0.0;
          for (std::size_t j = 0; j < p.size(); ++j) s += (p[j] - v[j]) * (p[j] - v[j]);
          return 0.5 * s;
        },
        v.size());
    for (std::size_t j = 0; j < v.size(); ++j) EXPECT_NEAR(w[j], grid[j], 1e-3);
  }
}

TEST(ProjectToSimplex, IdempotentAndPermutationEquivariant) {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> val(0.2, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> v(1 + trial % 7);
    for (auto& x : v) x = val(rng);
    const auto w = project_to_simplex(v);
    EXPECT_EQ(project_to_simplex(w), w);

    std::vector<std::size_t> perm(v.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> pv(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) pv[j] = v[perm[j]];
    const auto pw = project_to_simplex(pv);
    for (std::size_t j = 0; j < v.size(); ++j) EXPECT_EQ(pw[j], w[perm[j]]);
  }
}

TEST(WeightGradient, ExactModeZeroDistances) {
  WeightSolverConfig cfg;
  cfg.gradient_mode = GradientMode::exact;
  cfg.lambda = 0.0;
  cfg.beta = 1.0;
  const std::vector<double> w(3, 1.0 / 3.0), d(3, 0.0);
  for (double g : weight_gradient(w, d, cfg)) EXPECT_EQ(g, 0.0);
}

TEST(WeightGradient, PaperModeDirectSubstitution) {
  WeightSolverConfig cfg;
  cfg.gradient_mode = GradientMode::paper;
  cfg.lambda = 0.0;
  const std::vector<double> w{1.0, 1.0, 1.0};
  const std::vector<double> d{0.0, 2.0, 7.5};
  const auto g = weight_gradient(w, d, cfg);
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_NEAR(g[j], -1.0 / (1.0 + std::exp(d[j])), 1e-15);
  }
  // With lambda the entropy term adds lambda (1 + log w).
  cfg.lambda = 0.3;
  const std::vector<double> w2{0.25, 0.75};
  const std::vector<double> d2{1.0, 3.0};
  const auto g2 = weight_gradient(w2, d2, cfg);
  for (std::size_t j = 0; j < 2; ++j) {
    EXPECT_NEAR(g2[j],
                -w2[j] / (1.0 + std::exp(w2[j] * d2[j])) +
                    0.3 * (1.0 + std::log(w2[j])),
                1e-15);
  }
}

TEST(WeightGradient, ExactModeMatchesFiniteDifferences) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> dist(0.0, 16 * kLog2);
  std::uniform_int_distribution<int> dim(2, 6);
  const double betas[] = {0.01, 0.1, 1.0};
  const double lambdas[] = {0.0, 0.01, 0.1, 1.0};
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t c = static_cast<std::size_t>(dim(rng));
    std::vector<double> d(c), w(c);
    for (auto& x : d) x = dist(rng);
    for (auto& x : w) x = 0.05 + std::uniform_real_distribution<double>(0, 1)(rng);
    const double total = simplex_sum(w);
    for (auto& x : w) x /= total;

    WeightSolverConfig cfg;
    cfg.gradient_mode = GradientMode::exact;
    cfg.beta = betas[trial % 3];
    cfg.lambda = lambdas[trial % 4];
    const auto g = weight_gradient(w, d, cfg);
    auto f = [&](const std::vector<double>& x) {
      return reference_objective(x, d, cfg.beta, cfg.lambda);
    };
    for (std::size_t j = 0; j < c; ++j) {
      const double fd = oracle::central_difference(f, w, j);
      EXPECT_TRUE(oracle::close_relative(g[j], fd, 1e-5, 1e-8))
          << "g=" << g[j] << " fd=" << fd;
    }
  }
}

TEST(WeightGradient, Errors) {
  WeightSolverConfig cfg;
  EXPECT_THROW(weight_gradient(std::vector<double>{0.5},
                               std::vector<double>{1.0, 2.0}, cfg),
               ArgumentError);
  cfg.weight_floor = 0.0;
  EXPECT_THROW(weight_gradient(std::vector<double>{1.0, 0.0},
                               std::vector<double>{1.0, 2.0}, cfg),
               InvariantError);
}

TEST(EntropyRegularizer, Examples) {
  EXPECT_NEAR(entropy_regularizer(std::vector<double>(4, 0.25)), -std::log(4.0), 1e-15);
  EXPECT_NEAR(entropy_regularizer(std::vector<double>{1.0, 0.0, 0.0}), 0.0, 1e-6);
  EXPECT_NEAR(entropy_regularizer(std::vector<double>{0.5, 0.5}), -0.6931471805599453, 1e-15);
}

TEST(SolveWeights, SymmetricDistancesGiveUniform) {
  for (auto mode : {GradientMode::paper, GradientMode::exact}) {
    for (double lambda : {0.01, 1.0, 10.0}) {
      WeightSolverConfig cfg;
      cfg.gradient_mode = mode;
      cfg.lambda = lambda;
      const auto sol = solve_weights(std::vector<double>{5, 5, 5}, cfg);
      for (double x : sol.weights) EXPECT_NEAR(x, 1.0 / 3.0, 1e-12);
    }
  }
}

TEST(SolveWeights, SmallLambdaConcentratesOnNearestCenter) {
  WeightSolverConfig cfg;
  cfg.gradient_mode = GradientMode::exact;
  cfg.beta = 1.0;
  cfg.lambda = 1e-4;
  const std::vector<double> d{1, 10, 10};
  const auto sol = solve_weights(d, cfg);
  const auto grid = oracle::grid_minimize_simplex(
      [&](const std::vector<double>& w) {
        return reference_objective(w, d, cfg.beta, cfg.lambda);
      },
      3);
  EXPECT_NEAR(sol.weights[0], 1.0, 0.01);
  EXPECT_NEAR(sol.weights[1], 0.0, 0.01);
  EXPECT_NEAR(sol.weights[2], 0.0, 0.01);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(sol.weights[j], grid[j], 0.01);
}

TEST(SolveWeights, LargeLambdaStaysNearUniform) {
  WeightSolverConfig cfg;
  cfg.gradient_mode = GradientMode::exact;
  cfg.beta = 1.0;
  cfg.lambda = 100.0;
  const std::vector<double> d{1, 10, 10};
  const auto sol = solve_weights(d, cfg);
  const auto grid = oracle::grid_minimize_simplex(
      [&](const std::vector<double>& w) {
        return reference_objective(w, d, cfg.beta, cfg.lambda);
      },
      3);
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_NEAR(sol.weights[j], 1.0 / 3.0, 0.05);
    EXPECT_NEAR(sol.weights[j], grid[j], 0.01);
  }
}

TEST(SolveWeights, FixedStepOscillatesForLargeLambda) {
  // Documents why exact mode backtracks: the plain eta = 0.1 step overshoots
  // when lambda / w is large.
  WeightSolverConfig cfg;
  cfg.gradient_mode = GradientMode::exact;
  cfg.beta = 1.0;
  cfg.lambda = 100.0;
  cfg.backtracking = false;
  const auto sol = solve_weights(std::vector<double>{1, 10, 10}, cfg);
  EXPECT_FALSE(sol.converged);
}

TEST(SolveWeights, TraceAndIterationBookkeeping) {
  WeightSolverConfig cfg;
  cfg.gradient_mode = GradientMode::exact;
  const std::vector<double> d{0.5, 3.0, 2.0};
  const auto sol = solve_weights(d, cfg);
  ASSERT_EQ(sol.objective_trace.size(), static_cast<std::size_t>(sol.iterations) + 1);
  EXPECT_NEAR(sol.objective_trace.front(),
              reference_objective({1.0 / 3, 1.0 / 3, 1.0 / 3}, d, cfg.beta, cfg.lambda),
              1e-12);
  EXPECT_NEAR(sol.objective_trace.back(),
              reference_objective(sol.weights, d, cfg.beta, cfg.lambda), 1e-12);

  cfg.max_iters = 3;
  cfg.tol = 1e-300;
  const auto capped = solve_weights(d, cfg);
  EXPECT_EQ(capped.iterations, 3);
}

TEST(SolveWeights, SingleCenterAndErrors) {
  WeightSolverConfig cfg;
  const auto sol = solve_weights(std::vector<double>{4.0}, cfg);
  EXPECT_EQ(sol.weights, (std::vector<double>{1.0}));
  EXPECT_THROW(solve_weights(std::vector<double>{}, cfg), ArgumentError);
  cfg.eta = 0.0;
  EXPECT_THROW(solve_weights(std::vector<double>{1.0, 2.0}, cfg), ArgumentError);
}

TEST(SolveWeights, WarmStartIsProjected) {
  WeightSolverConfig cfg;
  cfg.gradient_mode = GradientMode::exact;
  cfg.max_iters = 1;
  const std::vector<double> d{1.0, 1.0};
  const auto sol = solve_weights(d, cfg, std::vector<double>{0.9, 0.1});
  EXPECT_NEAR(sol.objective_trace.front(),
              reference_objective({0.9, 0.1}, d, cfg.beta, cfg.lambda), 1e-12);
  EXPECT_THROW(solve_weights(d, cfg, std::vector<double>{1.0}), ArgumentError);
}

// Properties over random instances: simplex output, the lower bound
// sum w d >= min d, and (exact mode) a non-increasing objective trace.
TEST(SolveWeights, RandomInstanceProperties) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> dist(0.0, 16 * kLog2);
  std::uniform_int_distribution<int> dim(2, 6);
  const double lambdas[] = {0.01, 0.1, 1.0};
  const double betas[] = {0.1, 1.0};
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t c = static_cast<std::size_t>(dim(rng));
    std::vector<double> d(c);
    for (auto& x : d) x = dist(rng);
    for (auto mode : {GradientMode::exact, GradientMode::paper}) {
      WeightSolverConfig cfg;
      cfg.gradient_mode = mode;
      cfg.lambda = lambdas[trial % 3];
      cfg.beta = betas[trial % 2];
      const auto sol = solve_weights(d, cfg);
      EXPECT_NEAR(simplex_sum(sol.weights), 1.0, 1e-9);
      double omega = 0.0;
      for (std::size_t j = 0; j < c; ++j) {
        EXPECT_GE(sol.weights[j], 0.0);
        omega += sol.weights[j] * d[j];
      }
      EXPECT_GE(omega, *std::min_element(d.begin(), d.end()) - 1e-9);
      if (mode == GradientMode::exact) {
        for (std::size_t t = 2; t < sol.objective_trace.size(); ++t) {
          EXPECT_LE(sol.objective_trace[t], sol.objective_trace[t - 1] + 1e-9);
        }
      }
    }
  }
}

}  // namespace
}  // namespace ics
