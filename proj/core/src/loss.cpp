#include "ics/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ics/error.hpp"
#include "ics/weights.hpp"
#include "numeric.hpp"

namespace ics {
namespace {

void check_item(const LossItem& item) {
  if (item.code == nullptr || item.assignment == nullptr) {
    throw ArgumentError("loss item is missing its code or assignment");
  }
  if (item.weights.size() != item.assignment->size()) {
    throw ArgumentError("weight vector length does not match center count");
  }
  if (item.code->size() != item.assignment->k_bits) {
    throw ArgumentError("code length does not match center length");
  }
}

void check_batch(std::span<const LossItem> batch) {
  if (batch.empty()) throw ArgumentError("empty batch");
  for (const auto& item : batch) check_item(item);
}

double quantization_term(double b) {
  return detail::log_cosh(std::abs(2.0 * b - 1.0) - 1.0);
}

double quantization_derivative(double b) {
  const double s = 2.0 * b - 1.0;
  if (s == 0.0) return 0.0;
  const double u = std::abs(s) - 1.0;
  return std::tanh(u) * (s > 0.0 ? 2.0 : -2.0);
}

}  // namespace

RelaxedCode::RelaxedCode(std::vector<double> values)
    : values_(std::move(values)) {
  for (double& v : values_) {
    if (std::isnan(v)) throw ArgumentError("relaxed code contains NaN");
    v = std::clamp(v, kCodeEpsilon, 1.0 - kCodeEpsilon);
  }
}

CenterAssignment make_assignment(const HashCenterSet& set,
                                 std::span<const std::size_t> labels) {
  if (labels.empty()) throw ArgumentError("assignment needs at least one label");
  CenterAssignment a;
  a.k_bits = set.k_bits;
  a.center_indices.assign(labels.begin(), labels.end());
  a.centers01.reserve(labels.size() * set.k_bits);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= set.m_labels) {
      throw ArgumentError("label index " + std::to_string(labels[i]) +
                          " out of range for " + std::to_string(set.m_labels) +
                          " centers");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (labels[j] == labels[i]) throw ArgumentError("duplicate label index");
    }
    for (auto v : set.row(labels[i])) {
      a.centers01.push_back(v > 0 ? 1 : 0);
    }
  }
  return a;
}

std::string_view to_string(Aggregation a) {
  return a == Aggregation::per_image ? "per-image" : "per-center";
}

Aggregation parse_aggregation(std::string_view name) {
  if (name == "per-image") return Aggregation::per_image;
  if (name == "per-center") return Aggregation::per_center;
  throw ArgumentError("unknown aggregation '" + std::string(name) + "'");
}

void LossConfig::validate() const {
  if (!(beta > 0.0 && beta <= 1.0)) throw ArgumentError("beta must lie in (0, 1]");
  if (!(gamma >= 0.0)) throw ArgumentError("gamma must be nonnegative");
  if (!(lambda >= 0.0)) throw ArgumentError("lambda must be nonnegative");
}

double bce_distance(const RelaxedCode& b,
                    std::span<const std::uint8_t> center01) {
  if (b.size() != center01.size()) {
    throw ArgumentError("code and center lengths differ");
  }
  double d = 0.0;
  for (std::size_t k = 0; k < b.size(); ++k) {
    d -= center01[k] ? std::log(b[k]) : std::log1p(-b[k]);
  }
  return d;
}

std::vector<double> center_distances(const RelaxedCode& b,
                                     const CenterAssignment& a) {
  std::vector<double> d(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) d[j] = bce_distance(b, a.center(j));
  return d;
}

double weighted_distance(const RelaxedCode& b, const CenterAssignment& a,
                         std::span<const double> w) {
  if (w.size() != a.size()) {
    throw ArgumentError("weight vector length does not match center count");
  }
  double omega = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    omega += w[j] * bce_distance(b, a.center(j));
  }
  return omega;
}

double central_likelihood(double omega, double beta) {
  return detail::logistic(-beta * omega);
}

double central_loss(std::span<const LossItem> batch, const LossConfig& cfg) {
  check_batch(batch);
  double j1 = 0.0;
  for (const auto& item : batch) {
    const auto d = center_distances(*item.code, *item.assignment);
    if (cfg.aggregation == Aggregation::per_image) {
      double omega = 0.0;
      for (std::size_t j = 0; j < d.size(); ++j) omega += item.weights[j] * d[j];
      j1 += detail::softplus(cfg.beta * omega);
    } else {
      for (std::size_t j = 0; j < d.size(); ++j) {
        j1 += detail::softplus(cfg.beta * item.weights[j] * d[j]);
      }
    }
  }
  return j1;
}

double quantization_loss(std::span<const RelaxedCode> codes) {
  double jq = 0.0;
  for (const auto& code : codes) {
    for (double b : code.values()) jq += quantization_term(b);
  }
  return jq;
}

double quantization_loss(std::span<const LossItem> batch) {
  double jq = 0.0;
  for (const auto& item : batch) {
    for (double b : item.code->values()) jq += quantization_term(b);
  }
  return jq;
}

LossParts total_loss(std::span<const LossItem> batch, const LossConfig& cfg) {
  check_batch(batch);
  LossParts parts;
  parts.j1 = central_loss(batch, cfg);
  parts.jq = quantization_loss(batch);
  for (const auto& item : batch) parts.r += entropy_regularizer(item.weights);
  parts.total = parts.j1 + cfg.gamma * parts.jq + cfg.lambda * parts.r;
  return parts;
}

std::vector<std::vector<double>> loss_gradient_wrt_codes(
    std::span<const LossItem> batch, const LossConfig& cfg) {
  check_batch(batch);
  std::vector<std::vector<double>> grads;
  grads.reserve(batch.size());
  for (const auto& item : batch) {
    const RelaxedCode& b = *item.code;
    const CenterAssignment& a = *item.assignment;
    const std::size_t k_bits = b.size();
    const auto d = center_distances(b, a);

    // Coefficient on dd_j/db for each center j.
    std::vector<double> coef(a.size());
    if (cfg.aggregation == Aggregation::per_image) {
      double omega = 0.0;
      for (std::size_t j = 0; j < a.size(); ++j) omega += item.weights[j] * d[j];
      const double s = detail::logistic(cfg.beta * omega);
      for (std::size_t j = 0; j < a.size(); ++j) {
        coef[j] = cfg.beta * s * item.weights[j];
      }
    } else {
      for (std::size_t j = 0; j < a.size(); ++j) {
        const double wj = item.weights[j];
        coef[j] = cfg.beta * wj * detail::logistic(cfg.beta * wj * d[j]);
      }
    }

    std::vector<double> g(k_bits, 0.0);
    for (std::size_t j = 0; j < a.size(); ++j) {
      auto v = a.center(j);
      for (std::size_t k = 0; k < k_bits; ++k) {
        // d/db of -[v log b + (1 - v) log(1 - b)]
        const double dd = v[k] ? -1.0 / b[k] : 1.0 / (1.0 - b[k]);
        g[k] += coef[j] * dd;
      }
    }
    if (cfg.gamma != 0.0) {
      for (std::size_t k = 0; k < k_bits; ++k) {
        g[k] += cfg.gamma * quantization_derivative(b[k]);
      }
    }
    grads.push_back(std::move(g));
  }
  return grads;
}

}  // namespace ics
