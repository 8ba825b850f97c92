#include "ics/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "ics/error.hpp"
#include "ics/text_io.hpp"
#include "numeric.hpp"
#include "random.hpp"

namespace ics {

Encoder::Encoder(std::vector<std::size_t> layer_sizes)
    : sizes_(std::move(layer_sizes)) {
  if (sizes_.size() < 2) {
    throw ArgumentError("encoder needs at least input and output sizes");
  }
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    if (sizes_[l] == 0 || sizes_[l + 1] == 0) {
      throw ArgumentError("encoder layer sizes must be positive");
    }
    offsets_.push_back(total);
    total += sizes_[l] * sizes_[l + 1] + sizes_[l + 1];
  }
  params_.assign(total, 0.0);
}

Encoder Encoder::initialized(std::vector<std::size_t> layer_sizes,
                             std::uint64_t seed) {
  Encoder enc(std::move(layer_sizes));
  auto rng = detail::make_engine(seed, 3);
  for (std::size_t l = 0; l < enc.num_layers(); ++l) {
    const double fan_in = static_cast<double>(enc.sizes_[l]);
    const bool output = l + 1 == enc.num_layers();
    const double sd = std::sqrt((output ? 1.0 : 2.0) / fan_in);
    const std::size_t n = enc.sizes_[l] * enc.sizes_[l + 1];
    double* w = enc.params_.data() + enc.weight_offset(l);
    for (std::size_t i = 0; i < n; ++i) w[i] = detail::normal(rng, 0.0, sd);
  }
  return enc;
}

std::span<const double> Encoder::weights(std::size_t layer) const {
  return {params_.data() + weight_offset(layer),
          sizes_[layer] * sizes_[layer + 1]};
}

std::span<const double> Encoder::bias(std::size_t layer) const {
  return {params_.data() + bias_offset(layer), sizes_[layer + 1]};
}

RelaxedCode Encoder::forward(std::span<const double> x) const {
  if (x.size() != input_dim()) {
    throw ArgumentError("encoder input has " + std::to_string(x.size()) +
                        " features, expected " + std::to_string(input_dim()));
  }
  std::vector<double> act(x.begin(), x.end());
  std::vector<double> next;
  for (std::size_t l = 0; l < num_layers(); ++l) {
    const std::size_t in = sizes_[l], out = sizes_[l + 1];
    const double* w = params_.data() + weight_offset(l);
    const double* b = params_.data() + bias_offset(l);
    next.assign(out, 0.0);
    const bool output = l + 1 == num_layers();
    for (std::size_t o = 0; o < out; ++o) {
      double z = b[o];
      for (std::size_t i = 0; i < in; ++i) z += w[o * in + i] * act[i];
      next[o] = output ? detail::logistic(z) : std::max(z, 0.0);
    }
    act.swap(next);
  }
  return RelaxedCode(std::move(act));
}

std::vector<double> Encoder::backward(
    std::span<const double> x, std::span<const double> grad_wrt_code) const {
  std::vector<double> grads(params_.size(), 0.0);
  accumulate_backward(x, grad_wrt_code, grads);
  return grads;
}

void Encoder::accumulate_backward(std::span<const double> x,
                                  std::span<const double> grad_wrt_code,
                                  std::span<double> grads) const {
  if (x.size() != input_dim()) throw ArgumentError("encoder input size mismatch");
  if (grad_wrt_code.size() != code_bits()) {
    throw ArgumentError("code gradient length does not match K");
  }
  if (grads.size() != params_.size()) {
    throw ArgumentError("gradient buffer size does not match parameters");
  }

  // Forward, keeping every layer's input and pre-activation.
  const std::size_t layers = num_layers();
  std::vector<std::vector<double>> inputs(layers);
  std::vector<std::vector<double>> pre(layers);
  std::vector<double> act(x.begin(), x.end());
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t in = sizes_[l], out = sizes_[l + 1];
    const double* w = params_.data() + weight_offset(l);
    const double* b = params_.data() + bias_offset(l);
    inputs[l] = act;
    pre[l].assign(out, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      double z = b[o];
      for (std::size_t i = 0; i < in; ++i) z += w[o * in + i] * act[i];
      pre[l][o] = z;
    }
    act.assign(out, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      act[o] = l + 1 == layers ? detail::logistic(pre[l][o])
                               : std::max(pre[l][o], 0.0);
    }
  }

  // delta = dJ/dz for the current layer.
  std::vector<double> delta(code_bits());
  for (std::size_t o = 0; o < code_bits(); ++o) {
    const double s = detail::logistic(pre[layers - 1][o]);
    delta[o] = grad_wrt_code[o] * s * (1.0 - s);
  }
  for (std::size_t l = layers; l-- > 0;) {
    const std::size_t in = sizes_[l], out = sizes_[l + 1];
    const double* w = params_.data() + weight_offset(l);
    double* gw = grads.data() + weight_offset(l);
    double* gb = grads.data() + bias_offset(l);
    const auto& a = inputs[l];
    for (std::size_t o = 0; o < out; ++o) {
      gb[o] += delta[o];
      for (std::size_t i = 0; i < in; ++i) gw[o * in + i] += delta[o] * a[i];
    }
    if (l == 0) break;
    std::vector<double> prev(in, 0.0);
    for (std::size_t i = 0; i < in; ++i) {
      if (pre[l - 1][i] <= 0.0) continue;  // rectifier gate
      double s = 0.0;
      for (std::size_t o = 0; o < out; ++o) s += w[o * in + i] * delta[o];
      prev[i] = s;
    }
    delta.swap(prev);
  }
}

BinaryCode binarize(const RelaxedCode& b) {
  BinaryCode code(b.size());
  for (std::size_t k = 0; k < b.size(); ++k) code.set_bit(k, b[k] >= 0.5);
  return code;
}

void adam_step(std::span<double> params, std::span<const double> grads,
               AdamState& state, const AdamConfig& cfg, double lr) {
  if (grads.size() != params.size() || state.m.size() != params.size() ||
      state.v.size() != params.size()) {
    throw ArgumentError("adam_step: shape mismatch");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(cfg.beta1, t);
  const double c2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g;
    state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g * g;
    const double m_hat = state.m[i] / c1;
    const double v_hat = state.v[i] / c2;
    params[i] -= lr * (m_hat / (std::sqrt(v_hat) + cfg.eps) +
                       cfg.weight_decay * params[i]);
  }
}

void write_checkpoint(std::ostream& out, const Encoder& enc,
                      const CheckpointMeta& meta) {
  out << "ics-encoder 1\n";
  out << "layers " << enc.layer_sizes().size();
  for (auto s : enc.layer_sizes()) out << ' ' << s;
  out << "\nk_bits " << meta.k_bits << "\nm_labels " << meta.m_labels
      << "\nseed " << meta.seed << "\nparams " << enc.num_params() << '\n';
  for (double p : enc.params()) out << format_double(p) << '\n';
}

Encoder read_checkpoint(std::istream& in, CheckpointMeta* meta) {
  LineReader reader(in);
  std::string line;
  auto expect = [&](std::string_view key) {
    if (!reader.next(line)) {
      throw ParseError(reader.line_number() + 1,
                       "missing '" + std::string(key) + "' line");
    }
    auto tokens = split_whitespace(line);
    if (tokens.empty() || tokens.front() != key) {
      throw ParseError(reader.line_number(),
                       "expected '" + std::string(key) + "'");
    }
    return tokens;
  };

  auto magic = expect("ics-encoder");
  if (magic.size() != 2 || magic[1] != "1") {
    throw ParseError(reader.line_number(), "unsupported checkpoint version");
  }
  auto layer_tokens = expect("layers");
  if (layer_tokens.size() < 2) throw ParseError(reader.line_number(), "no layers");
  const std::size_t n = parse_uint(layer_tokens[1], reader.line_number());
  if (layer_tokens.size() != n + 2 || n < 2) {
    throw ParseError(reader.line_number(), "layer count does not match sizes");
  }
  std::vector<std::size_t> sizes;
  for (std::size_t i = 0; i < n; ++i) {
    sizes.push_back(parse_uint(layer_tokens[i + 2], reader.line_number()));
    if (sizes.back() == 0) throw ParseError(reader.line_number(), "zero layer size");
  }
  CheckpointMeta m;
  auto single = [&](std::string_view key) {
    auto t = expect(key);
    if (t.size() != 2) throw ParseError(reader.line_number(), "expected one value");
    return parse_uint(t[1], reader.line_number());
  };
  m.k_bits = single("k_bits");
  m.m_labels = single("m_labels");
  m.seed = single("seed");
  const std::size_t count = single("params");

  Encoder enc(std::move(sizes));
  if (m.k_bits != enc.code_bits()) {
    throw ParseError(reader.line_number(), "k_bits disagrees with layer sizes");
  }
  if (count != enc.num_params()) {
    throw ParseError(reader.line_number(), "parameter count disagrees with layers");
  }
  auto params = enc.params();
  for (std::size_t i = 0; i < count; ++i) {
    if (!reader.next(line)) {
      throw ParseError(reader.line_number() + 1, "missing parameter value");
    }
    params[i] = parse_double(line, reader.line_number());
  }
  if (meta != nullptr) *meta = m;
  return enc;
}

void save_checkpoint(const std::string& path, const Encoder& enc,
                     const CheckpointMeta& meta) {
  auto out = open_output(path);
  write_checkpoint(out, enc, meta);
  if (!out) throw IoError(path, "write failed");
}

Encoder load_checkpoint(const std::string& path, CheckpointMeta* meta) {
  auto in = open_input(path);
  return read_checkpoint(in, meta);
}

}  // namespace ics
