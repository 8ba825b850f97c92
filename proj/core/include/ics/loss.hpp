#pragma once

// The instance-weighted central similarity objective over relaxed codes:
//   J = J1 + gamma * Jq + lambda * sum_i R(w_i)
// with J1 = sum_i softplus(beta * Omega_i), Omega_i = sum_j w_ij d_ij and
// d_ij the binary cross entropy between code i and its j-th center.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "ics/centers.hpp"

namespace ics {

/// Relaxed codes are kept inside (kCodeEpsilon, 1 - kCodeEpsilon).
inline constexpr double kCodeEpsilon = 1e-7;

/// Encoder output in (0, 1)^K; clamped on construction so every log is finite.
class RelaxedCode {
 public:
  RelaxedCode() = default;
  explicit RelaxedCode(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const RelaxedCode&, const RelaxedCode&) = default;

 private:
  std::vector<double> values_;
};

/// A sample's positive labels and their centers mapped to {0, 1}.
struct CenterAssignment {
  std::vector<std::size_t> center_indices;
  std::size_t k_bits = 0;
  /// c rows of k_bits values in {0, 1}, row-major.
  std::vector<std::uint8_t> centers01;

  std::size_t size() const noexcept { return center_indices.size(); }
  std::span<const std::uint8_t> center(std::size_t j) const {
    return {centers01.data() + j * k_bits, k_bits};
  }
};

/// Builds the assignment for `labels` (distinct, each < set.m_labels),
/// mapping v -> (v + 1) / 2.
CenterAssignment make_assignment(const HashCenterSet& set,
                                 std::span<const std::size_t> labels);

enum class Aggregation {
  per_image,   // softplus(beta * sum_j w_j d_j)
  per_center,  // sum_j softplus(beta * w_j d_j)
};

std::string_view to_string(Aggregation a);
Aggregation parse_aggregation(std::string_view name);

struct LossConfig {
  double beta = 0.1;
  double gamma = 0.05;
  double lambda = 0.01;
  Aggregation aggregation = Aggregation::per_image;

  void validate() const;
};

/// One batch member. Non-owning; the pointees must outlive the call.
struct LossItem {
  const RelaxedCode* code = nullptr;
  const CenterAssignment* assignment = nullptr;
  std::span<const double> weights;
};

/// -sum_k [v_k log b_k + (1 - v_k) log(1 - b_k)] >= 0.
double bce_distance(const RelaxedCode& b, std::span<const std::uint8_t> center01);

/// d_j for each center of the assignment.
std::vector<double> center_distances(const RelaxedCode& b,
                                     const CenterAssignment& a);

/// Omega = sum_j w_j d_j.
double weighted_distance(const RelaxedCode& b, const CenterAssignment& a,
                         std::span<const double> w);

/// p = 1 / (1 + exp(beta * omega)).
double central_likelihood(double omega, double beta);

/// J1 = -sum_i log p_i (or the per-center variant).
double central_loss(std::span<const LossItem> batch, const LossConfig& cfg);

double quantization_loss(std::span<const RelaxedCode> codes);
double quantization_loss(std::span<const LossItem> batch);

struct LossParts {
  double total = 0.0;
  double j1 = 0.0;
  double jq = 0.0;
  /// sum_i R(w_i), before the lambda factor.
  double r = 0.0;
};

LossParts total_loss(std::span<const LossItem> batch, const LossConfig& cfg);

/// dJ/db_ik with weights held fixed. At b = 0.5 the |2b - 1| kink takes
/// subgradient 0.
std::vector<std::vector<double>> loss_gradient_wrt_codes(
    std::span<const LossItem> batch, const LossConfig& cfg);

}  // namespace ics
