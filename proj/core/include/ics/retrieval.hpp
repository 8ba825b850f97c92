#pragma once

// Bit-packed binary codes, Hamming ranking, and retrieval metrics.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ics {

/// K-bit code packed into 64-bit words; bit = 1 encodes +1, bit = 0 encodes
/// -1. Pad bits past K are always zero.
class BinaryCode {
 public:
  BinaryCode() = default;
  /// All bits -1.
  explicit BinaryCode(std::size_t k_bits);

  static BinaryCode from_signs(std::span<const std::int8_t> signs);
  /// Entries are 0 or 1.
  static BinaryCode from_bits(std::span<const std::uint8_t> bits);
  /// Pad bits of the last word are cleared.
  static BinaryCode from_words(std::size_t k_bits,
                               std::vector<std::uint64_t> words);

  std::size_t k_bits() const noexcept { return k_bits_; }
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  bool bit(std::size_t k) const { return (words_[k / 64] >> (k % 64)) & 1u; }
  void set_bit(std::size_t k, bool value);
  /// +1 or -1.
  int sign(std::size_t k) const { return bit(k) ? 1 : -1; }

  friend bool operator==(const BinaryCode&, const BinaryCode&) = default;

 private:
  std::size_t k_bits_ = 0;
  std::vector<std::uint64_t> words_;
};

/// XOR + popcount. Throws ArgumentError on a length mismatch.
std::size_t hamming(const BinaryCode& a, const BinaryCode& b);

struct RankedResult {
  std::size_t query = 0;
  /// Database indices by ascending distance, ties by ascending index.
  std::vector<std::size_t> order;
  std::vector<std::size_t> distances;
};

/// Counting sort over the K + 1 possible distances; stable in index order.
RankedResult rank_database(const BinaryCode& query,
                           std::span<const BinaryCode> database,
                           std::size_t query_index = 0);

/// True iff the two label vectors (entries 0/1) share a positive label.
bool relevant(std::span<const std::uint8_t> query_labels,
              std::span<const std::uint8_t> db_labels);

/// Codes with their label vectors, index-aligned.
struct LabeledCodes {
  std::vector<BinaryCode> codes;
  std::vector<std::vector<std::uint8_t>> labels;
};

struct RetrievalMetrics {
  double map_at_k = 0.0;
  double precision_at_k = 0.0;
  std::size_t k = 0;
  std::size_t n_queries = 0;
  std::size_t n_database = 0;
  /// Queries with at least one relevant database item; both means run over
  /// these.
  std::size_t n_evaluated = 0;
};

/// AP@k = sum_{r<=k} P@r * rel(r) / min(k, #relevant in database), averaged
/// over queries that have a relevant item; P@k uses min(k, N) as its
/// denominator. Throws EvaluationError when no query has a relevant item.
RetrievalMetrics evaluate_retrieval(const LabeledCodes& queries,
                                    const LabeledCodes& database,
                                    std::size_t k, unsigned threads = 1);

double map_at_k(const LabeledCodes& queries, const LabeledCodes& database,
                std::size_t k);
double precision_at_k(const LabeledCodes& queries,
                      const LabeledCodes& database, std::size_t k);

// Codes file: "N K", then N lines of K characters in {0, 1}.
void write_codes(std::ostream& out, std::span<const BinaryCode> codes);
std::vector<BinaryCode> read_codes(std::istream& in);
void save_codes(const std::string& path, std::span<const BinaryCode> codes);
std::vector<BinaryCode> load_codes(const std::string& path);

}  // namespace ics
