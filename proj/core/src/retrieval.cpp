#include "ics/retrieval.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>

#include "ics/error.hpp"
#include "ics/parallel.hpp"
#include "ics/text_io.hpp"

namespace ics {
namespace {

std::size_t word_count(std::size_t k_bits) { return (k_bits + 63) / 64; }

using PackedLabels = std::vector<std::uint64_t>;

PackedLabels pack_labels(std::span<const std::uint8_t> labels) {
  PackedLabels out(word_count(labels.size()), 0);
  for (std::size_t m = 0; m < labels.size(); ++m) {
    if (labels[m]) out[m / 64] |= std::uint64_t{1} << (m % 64);
  }
  return out;
}

bool shares_label(const PackedLabels& a, const PackedLabels& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] & b[i]) return true;
  }
  return false;
}

struct QueryScore {
  double ap = 0.0;
  double precision = 0.0;
  bool has_relevant = false;
};

void check_sets(const LabeledCodes& queries, const LabeledCodes& database,
                std::size_t k) {
  if (k < 1) throw ArgumentError("k must be at least 1");
  if (database.codes.empty()) throw ArgumentError("empty database");
  if (queries.codes.empty()) throw ArgumentError("no queries");
  if (queries.codes.size() != queries.labels.size() ||
      database.codes.size() != database.labels.size()) {
    throw ArgumentError("codes and labels are not index-aligned");
  }
  const std::size_t m = database.labels.front().size();
  for (const auto* set : {&queries, &database}) {
    for (const auto& l : set->labels) {
      if (l.size() != m) throw ArgumentError("label dimensions differ");
    }
  }
}

}  // namespace

BinaryCode::BinaryCode(std::size_t k_bits)
    : k_bits_(k_bits), words_(word_count(k_bits), 0) {}

BinaryCode BinaryCode::from_signs(std::span<const std::int8_t> signs) {
  BinaryCode code(signs.size());
  for (std::size_t k = 0; k < signs.size(); ++k) {
    if (signs[k] != 1 && signs[k] != -1) {
      throw ArgumentError("sign entries must be +1 or -1");
    }
    if (signs[k] > 0) code.words_[k / 64] |= std::uint64_t{1} << (k % 64);
  }
  return code;
}

BinaryCode BinaryCode::from_bits(std::span<const std::uint8_t> bits) {
  BinaryCode code(bits.size());
  for (std::size_t k = 0; k < bits.size(); ++k) {
    if (bits[k] > 1) throw ArgumentError("bit entries must be 0 or 1");
    if (bits[k]) code.words_[k / 64] |= std::uint64_t{1} << (k % 64);
  }
  return code;
}

BinaryCode BinaryCode::from_words(std::size_t k_bits,
                                  std::vector<std::uint64_t> words) {
  if (words.size() != word_count(k_bits)) {
    throw ArgumentError("word count does not match k_bits");
  }
  BinaryCode code;
  code.k_bits_ = k_bits;
  code.words_ = std::move(words);
  if (k_bits % 64 != 0) {
    code.words_.back() &= (std::uint64_t{1} << (k_bits % 64)) - 1;
  }
  return code;
}

void BinaryCode::set_bit(std::size_t k, bool value) {
  const std::uint64_t mask = std::uint64_t{1} << (k % 64);
  if (value) {
    words_[k / 64] |= mask;
  } else {
    words_[k / 64] &= ~mask;
  }
}

std::size_t hamming(const BinaryCode& a, const BinaryCode& b) {
  if (a.k_bits() != b.k_bits()) {
    throw ArgumentError("hamming: code lengths differ");
  }
  auto wa = a.words();
  auto wb = b.words();
  std::size_t d = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) {
    d += static_cast<std::size_t>(std::popcount(wa[i] ^ wb[i]));
  }
  return d;
}

RankedResult rank_database(const BinaryCode& query,
                           std::span<const BinaryCode> database,
                           std::size_t query_index) {
  if (database.empty()) throw ArgumentError("rank_database: empty database");
  const std::size_t n = database.size();
  const std::size_t k = query.k_bits();

  std::vector<std::size_t> dist(n);
  std::vector<std::size_t> bucket(k + 2, 0);
  for (std::size_t i = 0; i < n; ++i) {
    dist[i] = hamming(query, database[i]);
    ++bucket[dist[i] + 1];
  }
  for (std::size_t b = 1; b < bucket.size(); ++b) bucket[b] += bucket[b - 1];

  RankedResult result;
  result.query = query_index;
  result.order.resize(n);
  result.distances.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t slot = bucket[dist[i]]++;
    result.order[slot] = i;
    result.distances[slot] = dist[i];
  }
  return result;
}

bool relevant(std::span<const std::uint8_t> query_labels,
              std::span<const std::uint8_t> db_labels) {
  if (query_labels.size() != db_labels.size()) {
    throw ArgumentError("relevant: label dimensions differ");
  }
  for (std::size_t m = 0; m < query_labels.size(); ++m) {
    if (query_labels[m] && db_labels[m]) return true;
  }
  return false;
}

RetrievalMetrics evaluate_retrieval(const LabeledCodes& queries,
                                    const LabeledCodes& database,
                                    std::size_t k, unsigned threads) {
  check_sets(queries, database, k);
  const std::size_t n_db = database.codes.size();
  std::vector<PackedLabels> db_labels;
  db_labels.reserve(n_db);
  for (const auto& l : database.labels) db_labels.push_back(pack_labels(l));

  std::vector<QueryScore> scores(queries.codes.size());
  parallel_for(queries.codes.size(), threads, [&](std::size_t q) {
    const PackedLabels ql = pack_labels(queries.labels[q]);
    std::size_t total_relevant = 0;
    for (const auto& dl : db_labels) total_relevant += shares_label(ql, dl);
    if (total_relevant == 0) return;

    const auto ranked = rank_database(queries.codes[q], database.codes, q);
    const std::size_t depth = std::min(k, n_db);
    std::size_t hits = 0;
    double ap_sum = 0.0;
    for (std::size_t r = 0; r < depth; ++r) {
      if (shares_label(ql, db_labels[ranked.order[r]])) {
        ++hits;
        ap_sum += static_cast<double>(hits) / static_cast<double>(r + 1);
      }
    }
    QueryScore& s = scores[q];
    s.has_relevant = true;
    s.ap = ap_sum / static_cast<double>(std::min(k, total_relevant));
    s.precision = static_cast<double>(hits) / static_cast<double>(depth);
  });

  RetrievalMetrics m;
  m.k = k;
  m.n_queries = queries.codes.size();
  m.n_database = n_db;
  for (const auto& s : scores) {
    if (!s.has_relevant) continue;
    ++m.n_evaluated;
    m.map_at_k += s.ap;
    m.precision_at_k += s.precision;
  }
  if (m.n_evaluated == 0) {
    throw EvaluationError("no query has a relevant item in the database");
  }
  m.map_at_k /= static_cast<double>(m.n_evaluated);
  m.precision_at_k /= static_cast<double>(m.n_evaluated);
  return m;
}

double map_at_k(const LabeledCodes& queries, const LabeledCodes& database,
                std::size_t k) {
  return evaluate_retrieval(queries, database, k).map_at_k;
}

double precision_at_k(const LabeledCodes& queries,
                      const LabeledCodes& database, std::size_t k) {
  return evaluate_retrieval(queries, database, k).precision_at_k;
}

void write_codes(std::ostream& out, std::span<const BinaryCode> codes) {
  const std::size_t k = codes.empty() ? 0 : codes.front().k_bits();
  out << codes.size() << ' ' << k << '\n';
  std::string line;
  for (const auto& code : codes) {
    if (code.k_bits() != k) throw ArgumentError("codes have mixed lengths");
    line.assign(k, '0');
    for (std::size_t i = 0; i < k; ++i) {
      if (code.bit(i)) line[i] = '1';
    }
    out << line << '\n';
  }
}

std::vector<BinaryCode> read_codes(std::istream& in) {
  LineReader reader(in);
  std::string line;
  if (!reader.next(line)) throw ParseError(1, "empty codes file");
  auto header = split_whitespace(line);
  if (header.size() != 2) throw ParseError(1, "expected header 'N K'");
  const std::size_t n = parse_uint(header[0], 1);
  const std::size_t k = parse_uint(header[1], 1);
  std::vector<BinaryCode> codes;
  codes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!reader.next(line)) {
      throw ParseError(reader.line_number() + 1, "missing code row");
    }
    if (line.size() != k) {
      throw ParseError(reader.line_number(),
                       "expected " + std::to_string(k) + " characters");
    }
    BinaryCode code(k);
    for (std::size_t b = 0; b < k; ++b) {
      if (line[b] == '1') {
        code.set_bit(b, true);
      } else if (line[b] != '0') {
        throw ParseError(reader.line_number(), "code characters must be 0/1");
      }
    }
    codes.push_back(std::move(code));
  }
  return codes;
}

void save_codes(const std::string& path, std::span<const BinaryCode> codes) {
  auto out = open_output(path);
  write_codes(out, codes);
  if (!out) throw IoError(path, "write failed");
}

std::vector<BinaryCode> load_codes(const std::string& path) {
  auto in = open_input(path);
  return read_codes(in);
}

}  // namespace ics
