#pragma once

// Per-sample hash-center weights: entropy-regularized objective over the
// probability simplex, solved by projected gradient descent.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace ics {

/// Point on the probability simplex, one entry per center of a sample.
using WeightVector = std::vector<double>;

enum class GradientMode {
  /// -w_j / (1 + exp(w_j d_j)) + lambda (1 + log w_j), as printed for the
  /// original algorithm.
  paper,
  /// Analytic gradient of F(w) = softplus(beta w.d) + lambda sum w log w.
  exact,
};

std::string_view to_string(GradientMode m);
GradientMode parse_gradient_mode(std::string_view name);

struct WeightSolverConfig {
  double lambda = 0.01;
  double eta = 0.1;
  double beta = 0.1;
  int max_iters = 50;
  double tol = 1e-6;
  GradientMode gradient_mode = GradientMode::paper;
  double weight_floor = 1e-8;
  /// Exact mode only: halve the step from eta until F decreases
  /// sufficiently (Armijo). Paper mode always takes the fixed step.
  bool backtracking = true;

  /// Throws ArgumentError on invalid settings for `c` centers.
  void validate(std::size_t c) const;
};

/// Euclidean projection onto {w : w >= 0, sum w = 1}. Sorts descending
/// (stable, ties by index), finds the largest rho with
/// q_rho + (1 - sum_{i<=rho} q_i) / rho > 0, and shifts by that threshold.
WeightVector project_to_simplex(std::span<const double> v);

/// Gradient of the weight subproblem at w (entries clamped to weight_floor
/// before any log).
std::vector<double> weight_gradient(std::span<const double> w,
                                    std::span<const double> d,
                                    const WeightSolverConfig& cfg);

/// F(w) = log(1 + exp(beta sum_j w_j d_j)) + lambda sum_j w_j log w_j.
/// This is the reported objective for both gradient modes.
double weight_objective(std::span<const double> w, std::span<const double> d,
                        const WeightSolverConfig& cfg);

/// sum_j w_j log w_j with entries clamped to `floor`.
double entropy_regularizer(std::span<const double> w, double floor = 1e-8);

struct WeightSolution {
  WeightVector weights;
  int iterations = 0;
  /// trace[0] is F at the starting point, trace[t] is F after iteration t.
  std::vector<double> objective_trace;
  bool converged = false;
};

/// Projected gradient descent from the uniform point (or `warm_start`, when
/// given) until the relative objective change drops below cfg.tol or
/// cfg.max_iters iterations have run.
WeightSolution solve_weights(std::span<const double> d,
                             const WeightSolverConfig& cfg,
                             std::span<const double> warm_start = {});

}  // namespace ics
