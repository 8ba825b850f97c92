#include "ics/centers.hpp"

#include <bit>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>

#include "ics/error.hpp"
#include "ics/text_io.hpp"
#include "random.hpp"

namespace ics {
namespace {

constexpr int kMaxRowRedraws = 1000;

// Row r of the Sylvester matrix of the given order: entry (r, c) is
// (-1)^popcount(r & c). Lets us emit single rows of very large orders.
std::vector<std::int8_t> sylvester_row(std::size_t order, std::size_t r) {
  std::vector<std::int8_t> out(order);
  for (std::size_t c = 0; c < order; ++c) {
    out[c] = (std::popcount(r & c) & 1) ? -1 : 1;
  }
  return out;
}

std::size_t row_distance(std::span<const std::int8_t> a,
                         std::span<const std::int8_t> b) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]);
  return d;
}

}  // namespace

HadamardMatrix sylvester_hadamard(unsigned k_exp) {
  if (k_exp > kMaxHadamardExponent) {
    throw CapacityError("Hadamard exponent " + std::to_string(k_exp) +
                        " exceeds limit " +
                        std::to_string(kMaxHadamardExponent));
  }
  HadamardMatrix h{1, {1}};
  for (unsigned k = 0; k < k_exp; ++k) {
    const std::size_t n = h.order;
    HadamardMatrix next{2 * n, std::vector<std::int8_t>(4 * n * n)};
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        const std::int8_t v = h.at(r, c);
        next.entries[r * 2 * n + c] = v;
        next.entries[r * 2 * n + c + n] = v;
        next.entries[(r + n) * 2 * n + c] = v;
        next.entries[(r + n) * 2 * n + c + n] = static_cast<std::int8_t>(-v);
      }
    }
    h = std::move(next);
  }
  return h;
}

std::string_view to_string(CenterStrategy s) {
  switch (s) {
    case CenterStrategy::hadamard_rows:
      return "hadamard-rows";
    case CenterStrategy::stacked_hadamard:
      return "stacked-hadamard";
    case CenterStrategy::bernoulli:
      return "bernoulli";
  }
  return "unknown";
}

CenterStrategy parse_center_strategy(std::string_view name) {
  if (name == "hadamard-rows") return CenterStrategy::hadamard_rows;
  if (name == "stacked-hadamard") return CenterStrategy::stacked_hadamard;
  if (name == "bernoulli") return CenterStrategy::bernoulli;
  throw ParseError(0, "unknown center strategy '" + std::string(name) + "'");
}

bool is_power_of_two(std::size_t n) { return std::has_single_bit(n); }

CenterStrategy select_center_strategy(std::size_t k_bits,
                                      std::size_t m_labels) {
  if (is_power_of_two(k_bits)) {
    if (m_labels <= k_bits) return CenterStrategy::hadamard_rows;
    if (m_labels <= 2 * k_bits) return CenterStrategy::stacked_hadamard;
  }
  return CenterStrategy::bernoulli;
}

HashCenterSet generate_centers(std::size_t k_bits, std::size_t m_labels,
                               std::uint64_t seed) {
  if (k_bits < 2) throw ArgumentError("k_bits must be at least 2");
  if (m_labels < 1) throw ArgumentError("m_labels must be at least 1");
  if (k_bits < 64 && m_labels > (std::size_t{1} << k_bits)) {
    throw CapacityError("cannot place " + std::to_string(m_labels) +
                        " distinct centers in " + std::to_string(k_bits) +
                        " bits");
  }

  HashCenterSet set;
  set.k_bits = k_bits;
  set.m_labels = m_labels;
  set.seed = seed;
  set.strategy = select_center_strategy(k_bits, m_labels);
  set.centers.reserve(k_bits * m_labels);
  auto rng = detail::make_engine(seed, 0);

  if (set.strategy != CenterStrategy::bernoulli) {
    if (k_bits > (std::size_t{1} << kMaxHadamardExponent)) {
      throw CapacityError("Hadamard order " + std::to_string(k_bits) +
                          " exceeds limit");
    }
    // Indices >= k_bits address the negated block of [H; -H].
    const std::size_t pool =
        set.strategy == CenterStrategy::hadamard_rows ? k_bits : 2 * k_bits;
    std::vector<std::size_t> rows(pool);
    std::iota(rows.begin(), rows.end(), 0);
    detail::shuffle(std::span<std::size_t>(rows), rng);
    for (std::size_t i = 0; i < m_labels; ++i) {
      const std::size_t r = rows[i];
      auto row = sylvester_row(k_bits, r % k_bits);
      if (r >= k_bits) {
        for (auto& v : row) v = static_cast<std::int8_t>(-v);
      }
      set.centers.insert(set.centers.end(), row.begin(), row.end());
    }
    return set;
  }

  const std::size_t lo = k_bits / 2;
  const std::size_t hi = (k_bits + 1) / 2;
  std::set<std::vector<std::int8_t>> seen;
  std::vector<std::int8_t> row(k_bits);
  for (std::size_t i = 0; i < m_labels; ++i) {
    bool accepted = false;
    for (int attempt = 0; attempt <= kMaxRowRedraws && !accepted; ++attempt) {
      std::size_t ones = 0;
      for (auto& v : row) {
        v = detail::uniform01(rng) < 0.5 ? 1 : -1;
        ones += (v == 1);
      }
      if (ones < lo || ones > hi) continue;
      accepted = seen.insert(row).second;
    }
    if (!accepted) {
      throw CapacityError("could not draw a balanced distinct center for label " +
                          std::to_string(i) + " after " +
                          std::to_string(kMaxRowRedraws) + " redraws");
    }
    set.centers.insert(set.centers.end(), row.begin(), row.end());
  }
  return set;
}

std::size_t min_pairwise_hamming(const HashCenterSet& set) {
  if (set.m_labels < 2) {
    throw ArgumentError("min_pairwise_hamming needs at least two centers");
  }
  std::size_t best = set.k_bits;
  for (std::size_t i = 0; i < set.m_labels; ++i) {
    for (std::size_t j = i + 1; j < set.m_labels; ++j) {
      best = std::min(best, row_distance(set.row(i), set.row(j)));
    }
  }
  return best;
}

void write_centers(std::ostream& out, const HashCenterSet& set) {
  out << set.k_bits << ' ' << set.m_labels << ' ' << to_string(set.strategy)
      << ' ' << set.seed << '\n';
  for (std::size_t i = 0; i < set.m_labels; ++i) {
    auto row = set.row(i);
    for (std::size_t k = 0; k < set.k_bits; ++k) {
      if (k) out << ' ';
      out << (row[k] > 0 ? "1" : "-1");
    }
    out << '\n';
  }
}

HashCenterSet read_centers(std::istream& in) {
  LineReader reader(in);
  std::string line;
  if (!reader.next(line)) throw ParseError(1, "empty centers file");
  auto header = split_whitespace(line);
  if (header.size() != 4) {
    throw ParseError(1, "expected header 'K M strategy seed'");
  }
  HashCenterSet set;
  set.k_bits = parse_uint(header[0], 1);
  set.m_labels = parse_uint(header[1], 1);
  try {
    set.strategy = parse_center_strategy(header[2]);
  } catch (const ParseError&) {
    throw ParseError(1, "unknown center strategy '" + std::string(header[2]) +
                            "'");
  }
  set.seed = parse_uint(header[3], 1);
  if (set.k_bits == 0 || set.m_labels == 0) {
    throw ParseError(1, "K and M must be positive");
  }
  set.centers.reserve(set.k_bits * set.m_labels);
  for (std::size_t i = 0; i < set.m_labels; ++i) {
    if (!reader.next(line)) {
      throw ParseError(reader.line_number() + 1, "missing center row");
    }
    auto tokens = split_whitespace(line);
    if (tokens.size() != set.k_bits) {
      throw ParseError(reader.line_number(),
                       "expected " + std::to_string(set.k_bits) + " values");
    }
    for (auto t : tokens) {
      if (t == "1") {
        set.centers.push_back(1);
      } else if (t == "-1") {
        set.centers.push_back(-1);
      } else {
        throw ParseError(reader.line_number(),
                         "center entries must be -1 or 1, got '" +
                             std::string(t) + "'");
      }
    }
  }
  return set;
}

void save_centers(const std::string& path, const HashCenterSet& set) {
  auto out = open_output(path);
  write_centers(out, set);
  if (!out) throw IoError(path, "write failed");
}

HashCenterSet load_centers(const std::string& path) {
  auto in = open_input(path);
  return read_centers(in);
}

}  // namespace ics
