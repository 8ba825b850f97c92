#pragma once

// Multi-label datasets: text I/O and a synthetic generator whose samples
// carry ground-truth mixture proportions.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ics {

struct MultiLabelSample {
  std::vector<double> features;
  /// M entries in {0, 1}; at least one is 1.
  std::vector<std::uint8_t> labels;
  /// One entry per positive label, in ascending label order; sums to 1.
  std::optional<std::vector<double>> proportions;

  /// Indices of the positive labels, ascending.
  std::vector<std::size_t> positive_labels() const;

  friend bool operator==(const MultiLabelSample&,
                         const MultiLabelSample&) = default;
};

struct Dataset {
  std::size_t d_features = 0;
  std::size_t m_labels = 0;
  std::vector<MultiLabelSample> samples;

  std::size_t size() const noexcept { return samples.size(); }
  bool has_proportions() const;

  /// Throws DataError naming the first offending sample.
  void validate() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct SyntheticSpec {
  std::size_t n_samples = 1000;
  std::size_t d_features = 16;
  std::size_t m_labels = 8;
  std::size_t min_labels = 1;
  std::size_t max_labels = 3;
  double dirichlet_alpha = 1.0;
  double noise_sigma = 0.1;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Draws M unit-norm Gaussian anchors, then per sample: c labels uniformly
/// without replacement, proportions ~ Dirichlet(alpha), and features
/// sum_j pi_j * anchor_j + N(0, sigma^2) noise. Pure function of `spec`.
Dataset generate_synthetic(const SyntheticSpec& spec);

// Text format: "N D M"; per sample a line of D reals, a line of M 0/1
// characters, and a line holding the proportions or a lone "-".
void write_dataset(std::ostream& out, const Dataset& data);
Dataset read_dataset(std::istream& in);
void save_dataset(const std::string& path, const Dataset& data);
Dataset load_dataset(const std::string& path);

/// Headerless CSV: each row holds the features followed by `m_labels` 0/1
/// label columns. No proportions.
Dataset read_csv_dataset(std::istream& in, std::size_t m_labels);
Dataset load_csv_dataset(const std::string& path, std::size_t m_labels);

/// Spearman rank correlation with average ranks for ties. Throws
/// EvaluationError for length < 2, mismatched lengths, or a constant input.
double spearman_corr(std::span<const double> a, std::span<const double> b);

}  // namespace ics
