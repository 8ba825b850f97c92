#include "ics/centers.hpp"

#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "ics/error.hpp"
#include "oracles.hpp"

namespace ics {
namespace {

std::size_t pair_distance(const HashCenterSet& s, std::size_t a, std::size_t b) {
  std::size_t d = 0;
  for (std::size_t k = 0; k < s.k_bits; ++k) d += s.row(a)[k] != s.row(b)[k];
  return d;
}

TEST(SylvesterHadamard, BaseCases) {
  const auto h0 = sylvester_hadamard(0);
  EXPECT_EQ(h0.order, 1u);
  EXPECT_EQ(h0.entries, (std::vector<std::int8_t>{1}));

  const auto h1 = sylvester_hadamard(1);
  EXPECT_EQ(h1.order, 2u);
  EXPECT_EQ(h1.entries, (std::vector<std::int8_t>{1, 1, 1, -1}));
}

TEST(SylvesterHadamard, OrderFourMatchesHandExpansion) {
  // H4 = [[H2, H2], [H2, -H2]]
  const std::vector<std::int8_t> expected{1, 1,  1,  1,  //
                                          1, -1, 1,  -1, //
                                          1, 1,  -1, -1, //
                                          1, -1, -1, 1};
  const auto h = sylvester_hadamard(2);
  EXPECT_EQ(h.entries, expected);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      int dot = 0;
      for (std::size_t k = 0; k < 4; ++k) dot += h.at(i, k) * h.at(j, k);
      EXPECT_EQ(dot, i == j ? 4 : 0);
    }
  }
}

TEST(SylvesterHadamard, RowsOrthogonalUpToOrder256) {
  for (unsigned e = 0; e <= 8; ++e) {
    const auto h = sylvester_hadamard(e);
    const std::size_t n = h.order;
    ASSERT_EQ(n, std::size_t{1} << e);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        ASSERT_EQ(h.at(r, c), oracle::sylvester_entry(n, r, c));
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        long dot = 0;
        for (std::size_t k = 0; k < n; ++k) dot += h.at(i, k) * h.at(j, k);
        ASSERT_EQ(dot, i == j ? static_cast<long>(n) : 0) << e << ' ' << i << ' ' << j;
      }
    }
  }
}

TEST(SylvesterHadamard, ExponentGuard) {
  EXPECT_THROW(sylvester_hadamard(17), CapacityError);
}

TEST(SelectStrategy, Thresholds) {
  EXPECT_EQ(select_center_strategy(16, 1), CenterStrategy::hadamard_rows);
  EXPECT_EQ(select_center_strategy(16, 16), CenterStrategy::hadamard_rows);
  EXPECT_EQ(select_center_strategy(16, 17), CenterStrategy::stacked_hadamard);
  EXPECT_EQ(select_center_strategy(16, 32), CenterStrategy::stacked_hadamard);
  EXPECT_EQ(select_center_strategy(16, 33), CenterStrategy::bernoulli);
  EXPECT_EQ(select_center_strategy(48, 10), CenterStrategy::bernoulli);
}

TEST(GenerateCenters, SixteenBitsTenLabels) {
  const auto set = generate_centers(16, 10, 7);
  EXPECT_EQ(set.strategy, CenterStrategy::hadamard_rows);
  ASSERT_EQ(set.centers.size(), 160u);
  const auto h = sylvester_hadamard(4);
  std::set<std::vector<std::int8_t>> rows_of_h;
  for (std::size_t r = 0; r < 16; ++r) {
    rows_of_h.emplace(h.row(r).begin(), h.row(r).end());
  }
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_TRUE(rows_of_h.count({set.row(i).begin(), set.row(i).end()}));
    for (std::size_t j = i + 1; j < 10; ++j) EXPECT_EQ(pair_distance(set, i, j), 8u);
  }
  EXPECT_EQ(min_pairwise_hamming(set), 8u);
}

TEST(GenerateCenters, SingleLabel) {
  const auto set = generate_centers(16, 1, 3);
  EXPECT_EQ(set.m_labels, 1u);
  const auto h = sylvester_hadamard(4);
  bool found = false;
  for (std::size_t r = 0; r < 16; ++r) {
    found |= std::equal(h.row(r).begin(), h.row(r).end(), set.row(0).begin());
  }
  EXPECT_TRUE(found);
  EXPECT_THROW(min_pairwise_hamming(set), ArgumentError);
}

TEST(GenerateCenters, StackedHadamard) {
  const auto set = generate_centers(16, 30, 11);
  EXPECT_EQ(set.strategy, CenterStrategy::stacked_hadamard);
  for (std::size_t i = 0; i < 30; ++i) {
    for (std::size_t j = i + 1; j < 30; ++j) {
      const auto d = pair_distance(set, i, j);
      // A row and its negation are K apart, every other pair K/2.
      EXPECT_TRUE(d == 8 || d == 16) << d;
    }
  }
  EXPECT_EQ(min_pairwise_hamming(set), 8u);
}

TEST(GenerateCenters, BernoulliBalancedAndDistinct) {
  const auto set = generate_centers(48, 80, 5);
  EXPECT_EQ(set.strategy, CenterStrategy::bernoulli);
  std::set<std::vector<std::int8_t>> seen;
  for (std::size_t i = 0; i < 80; ++i) {
    const auto row = set.row(i);
    EXPECT_EQ(std::count(row.begin(), row.end(), 1), 24);
    EXPECT_TRUE(seen.emplace(row.begin(), row.end()).second);
  }
}

TEST(GenerateCenters, BernoulliOddLength) {
  const auto set = generate_centers(7, 20, 9);
  for (std::size_t i = 0; i < 20; ++i) {
    const auto ones = std::count(set.row(i).begin(), set.row(i).end(), 1);
    EXPECT_TRUE(ones == 3 || ones == 4);
  }
}

TEST(GenerateCenters, Deterministic) {
  EXPECT_EQ(generate_centers(32, 20, 99), generate_centers(32, 20, 99));
  EXPECT_EQ(generate_centers(48, 80, 1), generate_centers(48, 80, 1));
  EXPECT_NE(generate_centers(32, 20, 99), generate_centers(32, 20, 100));
}

TEST(GenerateCenters, Errors) {
  EXPECT_THROW(generate_centers(1, 1, 0), ArgumentError);
  EXPECT_THROW(generate_centers(16, 0, 0), ArgumentError);
  EXPECT_THROW(generate_centers(3, 9, 0), CapacityError);
  // 8 <= 2^3 but only 6 balanced 3-bit codes exist.
  EXPECT_THROW(generate_centers(3, 7, 0), CapacityError);
}

TEST(MinPairwiseHamming, HandBuiltSets) {
  HashCenterSet same{4, 2, {1, -1, 1, -1, 1, -1, 1, -1}, CenterStrategy::bernoulli, 0};
  EXPECT_EQ(min_pairwise_hamming(same), 0u);

  HashCenterSet complement{16, 2, {}, CenterStrategy::bernoulli, 0};
  complement.centers.assign(16, 1);
  complement.centers.insert(complement.centers.end(), 16, -1);
  EXPECT_EQ(min_pairwise_hamming(complement), 16u);

  EXPECT_EQ(min_pairwise_hamming(generate_centers(32, 32, 4)), 16u);
}

TEST(CentersFile, RoundTripIsBitExact) {
  const auto set = generate_centers(16, 10, 7);
  std::stringstream ss;
  write_centers(ss, set);
  const std::string text = ss.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "16 10 hadamard-rows 7");
  const auto back = read_centers(ss);
  EXPECT_EQ(back, set);
  std::stringstream again;
  write_centers(again, back);
  EXPECT_EQ(again.str(), text);
}

TEST(CentersFile, RejectsMalformedInput) {
  std::istringstream empty("");
  EXPECT_THROW(read_centers(empty), ParseError);
  std::istringstream bad_value("2 1 bernoulli 0\n1 0\n");
  EXPECT_THROW(read_centers(bad_value), ParseError);
  std::istringstream short_row("2 2 bernoulli 0\n1 -1\n1\n");
  try {
    read_centers(short_row);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

}  // namespace
}  // namespace ics
