#pragma once

// Hadamard matrices and hash-center sets.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ics {

/// Largest Sylvester exponent accepted (order 65536).
inline constexpr unsigned kMaxHadamardExponent = 16;

/// Square ±1 matrix with pairwise orthogonal rows, stored row-major.
struct HadamardMatrix {
  std::size_t order = 0;
  std::vector<std::int8_t> entries;

  std::int8_t at(std::size_t row, std::size_t col) const {
    return entries[row * order + col];
  }
  std::span<const std::int8_t> row(std::size_t r) const {
    return {entries.data() + r * order, order};
  }
};

/// H_1 = [1]; H_{2^k} = H_2 ⊗ H_{2^{k-1}} with H_2 = [[1, 1], [1, -1]].
/// Throws CapacityError when k_exp > kMaxHadamardExponent.
HadamardMatrix sylvester_hadamard(unsigned k_exp);

enum class CenterStrategy {
  hadamard_rows,     // m <= K rows of H_K
  stacked_hadamard,  // K < m <= 2K rows of [H_K; -H_K]
  bernoulli,         // balanced random codes
};

std::string_view to_string(CenterStrategy s);
/// Accepts the names produced by to_string; throws ParseError(line 0) otherwise.
CenterStrategy parse_center_strategy(std::string_view name);

/// M hash centers of K bits each, ±1 valued, row-major.
struct HashCenterSet {
  std::size_t k_bits = 0;
  std::size_t m_labels = 0;
  std::vector<std::int8_t> centers;
  CenterStrategy strategy = CenterStrategy::hadamard_rows;
  std::uint64_t seed = 0;

  std::span<const std::int8_t> row(std::size_t label) const {
    return {centers.data() + label * k_bits, k_bits};
  }

  friend bool operator==(const HashCenterSet&, const HashCenterSet&) = default;
};

bool is_power_of_two(std::size_t n);

/// Strategy that generate_centers uses for (k_bits, m_labels). Bernoulli
/// covers every case the two Hadamard strategies cannot.
CenterStrategy select_center_strategy(std::size_t k_bits, std::size_t m_labels);

/// Samples hash centers deterministically from (k_bits, m_labels, seed).
/// Hadamard strategies draw distinct row indices with a seeded Fisher-Yates
/// shuffle; the Bernoulli strategy redraws a row until it is balanced and
/// distinct from all earlier rows, giving up after 1000 redraws.
HashCenterSet generate_centers(std::size_t k_bits, std::size_t m_labels,
                               std::uint64_t seed);

/// Minimum Hamming distance over distinct center pairs.
std::size_t min_pairwise_hamming(const HashCenterSet& set);

// Text format: "K M strategy seed", then M lines of K values in {-1, 1}.
void write_centers(std::ostream& out, const HashCenterSet& set);
HashCenterSet read_centers(std::istream& in);
void save_centers(const std::string& path, const HashCenterSet& set);
HashCenterSet load_centers(const std::string& path);

}  // namespace ics
