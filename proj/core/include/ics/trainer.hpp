#pragma once

// Two-step alternating optimization: with the encoder frozen, re-solve each
// sample's center weights from its current distances; then, with the
// weights frozen, take an Adam step on the encoder.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "ics/centers.hpp"
#include "ics/data.hpp"
#include "ics/encoder.hpp"
#include "ics/loss.hpp"
#include "ics/weights.hpp"

namespace ics {

enum class WeightMode {
  learned,
  /// Weights fixed at 1/c_i (the equal-weight ablation).
  equal,
};

std::string_view to_string(WeightMode m);
WeightMode parse_weight_mode(std::string_view name);

struct TrainConfig {
  int epochs = 90;
  std::size_t batch_size = 64;
  std::vector<std::size_t> hidden_layers = {64};
  AdamConfig adam;
  /// Learning rate is multiplied by lr_decay every lr_step_epochs epochs.
  int lr_step_epochs = 30;
  double lr_decay = 0.1;
  LossConfig loss;
  /// lambda and beta are taken from `loss`; the remaining fields apply.
  WeightSolverConfig solver;
  WeightMode weight_mode = WeightMode::learned;
  std::uint64_t seed = 0;
  unsigned threads = 1;

  void validate() const;
  /// Solver settings with lambda and beta synced from the loss.
  WeightSolverConfig effective_solver() const;
  double learning_rate(int epoch) const;
};

struct EpochLoss {
  double j = 0.0;
  double j1 = 0.0;
  double jq = 0.0;
  double r = 0.0;
};

struct TrainState {
  Encoder encoder;
  AdamState adam;
  /// One simplex row per training sample, aligned with positive labels in
  /// ascending order.
  std::vector<WeightVector> weight_table;
  std::vector<EpochLoss> loss_history;
};

/// Seeded encoder, zero Adam moments, uniform weights, empty history.
/// Validates the dataset against the centers (DataError / ConfigError).
TrainState initial_train_state(const Dataset& data, const HashCenterSet& centers,
                               const TrainConfig& cfg);

/// Runs cfg.epochs epochs of alternating optimization. Each epoch visits the
/// samples in a seeded shuffled order; the recorded loss is the sum of the
/// per-batch objectives evaluated before each parameter update.
TrainState train(const Dataset& data, const HashCenterSet& centers,
                 const TrainConfig& cfg);

/// Relaxed codes of every sample under `enc`.
std::vector<RelaxedCode> encode_all(const Encoder& enc, const Dataset& data,
                                    unsigned threads = 1);

}  // namespace ics
