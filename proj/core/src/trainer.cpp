#include "ics/trainer.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "ics/error.hpp"
#include "ics/parallel.hpp"
#include "random.hpp"

namespace ics {
namespace {

void check_dataset(const Dataset& data, const HashCenterSet& centers) {
  if (data.samples.empty()) throw DataError("training set is empty");
  if (data.m_labels != centers.m_labels) {
    throw ConfigError("dataset has " + std::to_string(data.m_labels) +
                      " labels but centers cover " +
                      std::to_string(centers.m_labels));
  }
  for (std::size_t i = 0; i < data.samples.size(); ++i) {
    const auto& s = data.samples[i];
    if (s.labels.size() != data.m_labels || s.features.size() != data.d_features) {
      throw DataError("sample " + std::to_string(i) + " has the wrong shape");
    }
    if (s.positive_labels().empty()) {
      throw DataError("sample " + std::to_string(i) + " has no positive label");
    }
  }
}

}  // namespace

std::string_view to_string(WeightMode m) {
  return m == WeightMode::learned ? "learned" : "equal";
}

WeightMode parse_weight_mode(std::string_view name) {
  if (name == "learned") return WeightMode::learned;
  if (name == "equal") return WeightMode::equal;
  throw ArgumentError("unknown weight mode '" + std::string(name) + "'");
}

void TrainConfig::validate() const {
  if (epochs < 0) throw ArgumentError("epochs must be nonnegative");
  if (batch_size < 1) throw ArgumentError("batch_size must be at least 1");
  if (lr_step_epochs < 1) throw ArgumentError("lr_step_epochs must be positive");
  if (!(adam.lr > 0.0)) throw ArgumentError("learning rate must be positive");
  loss.validate();
  effective_solver().validate(0);
}

WeightSolverConfig TrainConfig::effective_solver() const {
  WeightSolverConfig s = solver;
  s.lambda = loss.lambda;
  s.beta = loss.beta;
  return s;
}

double TrainConfig::learning_rate(int epoch) const {
  return adam.lr * std::pow(lr_decay, epoch / lr_step_epochs);
}

TrainState initial_train_state(const Dataset& data,
                               const HashCenterSet& centers,
                               const TrainConfig& cfg) {
  cfg.validate();
  check_dataset(data, centers);
  std::vector<std::size_t> sizes{data.d_features};
  sizes.insert(sizes.end(), cfg.hidden_layers.begin(), cfg.hidden_layers.end());
  sizes.push_back(centers.k_bits);

  TrainState state;
  state.encoder = Encoder::initialized(std::move(sizes), cfg.seed);
  state.adam = AdamState(state.encoder.num_params());
  state.weight_table.reserve(data.samples.size());
  for (const auto& s : data.samples) {
    const std::size_t c = s.positive_labels().size();
    state.weight_table.emplace_back(c, 1.0 / static_cast<double>(c));
  }
  return state;
}

std::vector<RelaxedCode> encode_all(const Encoder& enc, const Dataset& data,
                                    unsigned threads) {
  std::vector<RelaxedCode> codes(data.samples.size());
  parallel_for(codes.size(), threads, [&](std::size_t i) {
    codes[i] = enc.forward(data.samples[i].features);
  });
  return codes;
}

TrainState train(const Dataset& data, const HashCenterSet& centers,
                 const TrainConfig& cfg) {
  TrainState state = initial_train_state(data, centers, cfg);
  const std::size_t n = data.samples.size();

  std::vector<CenterAssignment> assignments;
  assignments.reserve(n);
  for (const auto& s : data.samples) {
    const auto labels = s.positive_labels();
    assignments.push_back(make_assignment(centers, labels));
  }

  const WeightSolverConfig solver = cfg.effective_solver();
  auto shuffle_rng = detail::make_engine(cfg.seed, 4);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  const std::size_t n_params = state.encoder.num_params();
  std::vector<double> grads(n_params);
  std::vector<RelaxedCode> codes;
  std::vector<LossItem> items;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    detail::shuffle(std::span<std::size_t>(order), shuffle_rng);
    const double lr = cfg.learning_rate(epoch);
    EpochLoss epoch_loss;

    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t end = std::min(n, start + cfg.batch_size);
      const std::size_t bsz = end - start;

      // Step 1: encoder frozen; codes, distances, weights.
      codes.assign(bsz, RelaxedCode{});
      parallel_for(bsz, cfg.threads, [&](std::size_t b) {
        const std::size_t i = order[start + b];
        codes[b] = state.encoder.forward(data.samples[i].features);
        if (cfg.weight_mode == WeightMode::learned && assignments[i].size() > 1) {
          const auto d = center_distances(codes[b], assignments[i]);
          state.weight_table[i] =
              solve_weights(d, solver, state.weight_table[i]).weights;
        }
      });

      // Step 2: weights frozen; loss, backprop, Adam.
      items.clear();
      for (std::size_t b = 0; b < bsz; ++b) {
        const std::size_t i = order[start + b];
        items.push_back({&codes[b], &assignments[i], state.weight_table[i]});
      }
      const LossParts parts = total_loss(items, cfg.loss);
      epoch_loss.j += parts.total;
      epoch_loss.j1 += parts.j1;
      epoch_loss.jq += parts.jq;
      epoch_loss.r += parts.r;

      const auto code_grads = loss_gradient_wrt_codes(items, cfg.loss);
      std::fill(grads.begin(), grads.end(), 0.0);
      for (std::size_t b = 0; b < bsz; ++b) {
        state.encoder.accumulate_backward(
            data.samples[order[start + b]].features, code_grads[b], grads);
      }
      adam_step(state.encoder.params(), grads, state.adam, cfg.adam, lr);
    }

    if (!std::isfinite(epoch_loss.j)) {
      throw InvariantError("non-finite loss in epoch " + std::to_string(epoch));
    }
    state.loss_history.push_back(epoch_loss);
  }
  return state;
}

}  // namespace ics
