#pragma once

// Portable random draws. std:: distributions are implementation-defined, so
// every sampler here goes through Boost.Random on top of the standard
// mt19937_64 engine, which fixes the output sequence across toolchains.

#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace ics::detail {

using Engine = std::mt19937_64;

/// splitmix64 finalizer; derives independent stream seeds from one user seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline Engine make_engine(std::uint64_t seed, std::uint64_t stream) {
  return Engine(mix_seed(seed, stream));
}

/// Uniform integer in [0, n).
inline std::size_t uniform_index(Engine& rng, std::size_t n) {
  boost::random::uniform_int_distribution<std::size_t> dist(0, n - 1);
  return dist(rng);
}

inline double uniform01(Engine& rng) {
  boost::random::uniform_01<double> dist;
  return dist(rng);
}

inline double normal(Engine& rng, double mean = 0.0, double sigma = 1.0) {
  boost::random::normal_distribution<double> dist(mean, sigma);
  return dist(rng);
}

inline double gamma(Engine& rng, double shape) {
  boost::random::gamma_distribution<double> dist(shape, 1.0);
  return dist(rng);
}

/// Fisher-Yates shuffle with portable index draws.
template <typename T>
void shuffle(std::span<T> items, Engine& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = uniform_index(rng, i);
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace ics::detail
