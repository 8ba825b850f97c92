#pragma once

// Feed-forward hash encoder f: R^D -> (0, 1)^K with hand-written reverse
// mode and an Adam optimizer.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ics/loss.hpp"
#include "ics/retrieval.hpp"

namespace ics {

/// Rectifier hidden layers, logistic output clamped into
/// (kCodeEpsilon, 1 - kCodeEpsilon). Parameters live in one flat vector:
/// per layer, the out x in weight grid (row-major) followed by the biases.
class Encoder {
 public:
  Encoder() = default;
  /// Zero-initialized network. layer_sizes = {D, h_1, ..., K}, at least two
  /// entries, all positive.
  explicit Encoder(std::vector<std::size_t> layer_sizes);

  /// Seeded Gaussian init (std sqrt(2 / fan_in) for hidden layers,
  /// sqrt(1 / fan_in) for the output layer); biases start at zero.
  static Encoder initialized(std::vector<std::size_t> layer_sizes,
                             std::uint64_t seed);

  const std::vector<std::size_t>& layer_sizes() const noexcept {
    return sizes_;
  }
  std::size_t input_dim() const { return sizes_.front(); }
  std::size_t code_bits() const { return sizes_.back(); }
  std::size_t num_layers() const { return sizes_.size() - 1; }

  std::span<double> params() noexcept { return params_; }
  std::span<const double> params() const noexcept { return params_; }
  std::size_t num_params() const noexcept { return params_.size(); }

  std::span<const double> weights(std::size_t layer) const;
  std::span<const double> bias(std::size_t layer) const;

  RelaxedCode forward(std::span<const double> x) const;

  /// Reverse pass of x -> code for a given dJ/dcode. Returns dJ/dparams in
  /// the flat layout. Where the output clamp is active the clamp is passed
  /// through as identity so saturated bits keep a training signal.
  std::vector<double> backward(std::span<const double> x,
                               std::span<const double> grad_wrt_code) const;

  /// backward(), accumulated into `grads` (length num_params()).
  void accumulate_backward(std::span<const double> x,
                           std::span<const double> grad_wrt_code,
                           std::span<double> grads) const;

  friend bool operator==(const Encoder&, const Encoder&) = default;

 private:
  std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
  std::size_t bias_offset(std::size_t layer) const {
    return offsets_[layer] + sizes_[layer] * sizes_[layer + 1];
  }

  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> offsets_;
  std::vector<double> params_;
};

/// Inference-time quantization: bit k is +1 iff b_k >= 0.5.
BinaryCode binarize(const RelaxedCode& b);

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.99;
  double eps = 1e-8;
  /// Decoupled decay: theta -= lr * weight_decay * theta each step.
  double weight_decay = 0.0;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t step = 0;

  explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
  friend bool operator==(const AdamState&, const AdamState&) = default;
};

/// One bias-corrected Adam update of `params` in place.
void adam_step(std::span<double> params, std::span<const double> grads,
               AdamState& state, const AdamConfig& cfg, double lr);

struct CheckpointMeta {
  std::size_t k_bits = 0;
  std::size_t m_labels = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const CheckpointMeta&, const CheckpointMeta&) = default;
};

// Checkpoint text format:
//   ics-encoder 1
//   layers <n> <s_0> ... <s_{n-1}>
//   k_bits <K>
//   m_labels <M>
//   seed <seed>
//   params <P>
//   <P lines, one shortest round-trip real each>
void write_checkpoint(std::ostream& out, const Encoder& enc,
                      const CheckpointMeta& meta);
Encoder read_checkpoint(std::istream& in, CheckpointMeta* meta = nullptr);
void save_checkpoint(const std::string& path, const Encoder& enc,
                     const CheckpointMeta& meta);
Encoder load_checkpoint(const std::string& path, CheckpointMeta* meta = nullptr);

}  // namespace ics
