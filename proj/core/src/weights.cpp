#include "ics/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ics/error.hpp"
#include "numeric.hpp"

namespace ics {
namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 40;
constexpr double kOnSimplexSlack = 1e-12;

double clamped(double w, double floor) { return std::max(w, floor); }

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw ArgumentError(std::string(what) + " contains a non-finite value");
    }
  }
}

double relative_change(double prev, double next) {
  return std::abs(next - prev) / std::max(std::abs(prev), 1e-12);
}

}  // namespace

std::string_view to_string(GradientMode m) {
  return m == GradientMode::paper ? "paper" : "exact";
}

GradientMode parse_gradient_mode(std::string_view name) {
  if (name == "paper") return GradientMode::paper;
  if (name == "exact") return GradientMode::exact;
  throw ArgumentError("unknown gradient mode '" + std::string(name) + "'");
}

void WeightSolverConfig::validate(std::size_t c) const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ArgumentError("lambda must be a nonnegative real");
  }
  if (!(eta > 0.0)) throw ArgumentError("eta must be positive");
  if (!(beta > 0.0)) throw ArgumentError("beta must be positive");
  if (max_iters < 1) throw ArgumentError("max_iters must be at least 1");
  if (!(tol > 0.0)) throw ArgumentError("tol must be positive");
  if (!(weight_floor > 0.0) ||
      (c > 0 && weight_floor >= 1.0 / static_cast<double>(c))) {
    throw ArgumentError("weight_floor must lie in (0, 1/c)");
  }
}

WeightVector project_to_simplex(std::span<const double> v) {
  if (v.empty()) throw ArgumentError("cannot project an empty vector");
  check_finite(v, "projection input");
  const std::size_t c = v.size();
  if (c == 1) return {1.0};

  // Points already on the simplex (up to rounding) map to themselves, which
  // keeps the projection exactly idempotent.
  if (std::all_of(v.begin(), v.end(), [](double x) { return x >= 0.0; }) &&
      std::abs(std::accumulate(v.begin(), v.end(), 0.0) - 1.0) <= kOnSimplexSlack) {
    return WeightVector(v.begin(), v.end());
  }

  std::vector<std::size_t> order(c);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });

  double prefix = 0.0;
  double rho_prefix = 0.0;
  std::size_t rho = 0;
  for (std::size_t j = 0; j < c; ++j) {
    const double q = v[order[j]];
    prefix += q;
    if (q + (1.0 - prefix) / static_cast<double>(j + 1) > 0.0) {
      rho = j + 1;
      rho_prefix = prefix;
    }
  }
  // rho >= 1 always holds: q_1 + (1 - q_1) = 1 > 0.
  const double xi = (1.0 - rho_prefix) / static_cast<double>(rho);

  WeightVector w(c);
  for (std::size_t j = 0; j < c; ++j) w[j] = std::max(v[j] + xi, 0.0);
  return w;
}

std::vector<double> weight_gradient(std::span<const double> w,
                                    std::span<const double> d,
                                    const WeightSolverConfig& cfg) {
  if (w.size() != d.size() || w.empty()) {
    throw ArgumentError("weight and distance vectors must have equal, "
                        "nonzero length");
  }
  const std::size_t c = w.size();
  std::vector<double> g(c);
  if (cfg.gradient_mode == GradientMode::paper) {
    for (std::size_t j = 0; j < c; ++j) {
      const double wj = clamped(w[j], cfg.weight_floor);
      if (!(wj > 0.0)) throw InvariantError("weight not positive before log");
      g[j] = -wj * detail::logistic(-wj * d[j]) +
             cfg.lambda * (1.0 + std::log(wj));
    }
    return g;
  }
  double omega = 0.0;
  for (std::size_t j = 0; j < c; ++j) omega += w[j] * d[j];
  const double s = detail::logistic(cfg.beta * omega);
  for (std::size_t j = 0; j < c; ++j) {
    const double wj = clamped(w[j], cfg.weight_floor);
    if (!(wj > 0.0)) throw InvariantError("weight not positive before log");
    g[j] = cfg.beta * d[j] * s + cfg.lambda * (1.0 + std::log(wj));
  }
  return g;
}

double entropy_regularizer(std::span<const double> w, double floor) {
  double r = 0.0;
  for (double x : w) {
    const double wj = clamped(x, floor);
    r += wj * std::log(wj);
  }
  return r;
}

double weight_objective(std::span<const double> w, std::span<const double> d,
                        const WeightSolverConfig& cfg) {
  double omega = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) omega += w[j] * d[j];
  return detail::softplus(cfg.beta * omega) +
         cfg.lambda * entropy_regularizer(w, cfg.weight_floor);
}

WeightSolution solve_weights(std::span<const double> d,
                             const WeightSolverConfig& cfg,
                             std::span<const double> warm_start) {
  const std::size_t c = d.size();
  if (c == 0) throw ArgumentError("solve_weights needs at least one center");
  cfg.validate(c);
  check_finite(d, "distance vector");

  WeightSolution sol;
  if (warm_start.empty()) {
    sol.weights.assign(c, 1.0 / static_cast<double>(c));
  } else {
    if (warm_start.size() != c) {
      throw ArgumentError("warm start length does not match distances");
    }
    sol.weights = project_to_simplex(warm_start);
  }

  double f = weight_objective(sol.weights, d, cfg);
  sol.objective_trace.push_back(f);
  if (c == 1) {
    sol.converged = true;
    return sol;
  }

  const bool line_search =
      cfg.backtracking && cfg.gradient_mode == GradientMode::exact;
  std::vector<double> trial(c);
  for (int it = 1; it <= cfg.max_iters; ++it) {
    const auto g = weight_gradient(sol.weights, d, cfg);
    double step = cfg.eta;
    WeightVector next;
    double f_next = f;
    bool moved = false;
    for (int h = 0; h <= (line_search ? kMaxHalvings : 0); ++h) {
      for (std::size_t j = 0; j < c; ++j) trial[j] = sol.weights[j] - step * g[j];
      next = project_to_simplex(trial);
      f_next = weight_objective(next, d, cfg);
      if (!line_search) {
        moved = true;
        break;
      }
      double directional = 0.0;
      for (std::size_t j = 0; j < c; ++j) {
        directional += g[j] * (next[j] - sol.weights[j]);
      }
      if (f_next <= f + kArmijo * directional) {
        moved = true;
        break;
      }
      step *= 0.5;
    }
    sol.iterations = it;
    if (!moved) {
      // No step of length >= eta / 2^40 decreases F: stationary to working
      // precision.
      sol.objective_trace.push_back(f);
      sol.converged = true;
      break;
    }
    sol.weights = std::move(next);
    sol.objective_trace.push_back(f_next);
    const double change = relative_change(f, f_next);
    f = f_next;
    if (change < cfg.tol) {
      sol.converged = true;
      break;
    }
  }
  return sol;
}

}  // namespace ics
