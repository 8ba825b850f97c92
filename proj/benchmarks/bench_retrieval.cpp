#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ics/retrieval.hpp"

namespace {

std::vector<ics::BinaryCode> random_codes(std::size_t n, std::size_t k,
                                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<ics::BinaryCode> codes;
  codes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::uint64_t> words((k + 63) / 64);
    for (auto& w : words) w = rng();
    codes.push_back(ics::BinaryCode::from_words(k, std::move(words)));
  }
  return codes;
}

void BM_Hamming(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto codes = random_codes(2, k, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ics::hamming(codes[0], codes[1]));
  }
}
BENCHMARK(BM_Hamming)->Arg(16)->Arg(64)->Arg(256);

void BM_RankDatabase(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto k = static_cast<std::size_t>(state.range(1));
  const auto db = random_codes(n, k, 2);
  const auto query = random_codes(1, k, 3);
  for (auto _ : state) {
    auto ranked = ics::rank_database(query[0], db);
    benchmark::DoNotOptimize(ranked.order.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}
BENCHMARK(BM_RankDatabase)->Args({10000, 16})->Args({10000, 64})->Args({100000, 64});

void BM_EvaluateRetrieval(benchmark::State& state) {
  const std::size_t n_db = 5000, n_q = 200, k_bits = 32, m = 16;
  std::mt19937_64 rng(4);
  ics::LabeledCodes db{random_codes(n_db, k_bits, 5), {}};
  ics::LabeledCodes q{random_codes(n_q, k_bits, 6), {}};
  auto labels = [&](std::size_t n) {
    std::vector<std::vector<std::uint8_t>> out(n, std::vector<std::uint8_t>(m, 0));
    for (auto& l : out) l[rng() % m] = 1;
    return out;
  };
  db.labels = labels(n_db);
  q.labels = labels(n_q);
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ics::evaluate_retrieval(q, db, 1000, threads));
  }
}
BENCHMARK(BM_EvaluateRetrieval)->Arg(1)->Arg(4)->UseRealTime();

}  // namespace
