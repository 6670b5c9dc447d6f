#pragma once

// Seeded randomness with a portable output sequence. std::uniform_int_distribution
// and std::shuffle are implementation-defined, so bounded draws are done here.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "qapdist/permutation.hpp"

namespace qapdist {

using Rng = std::mt19937_64;

/// Uniform integer in [0, bound). Lemire's multiply-and-reject.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below: bound must be positive");
  using u128 = unsigned __int128;
  std::uint64_t x = rng();
  u128 m = static_cast<u128>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      x = rng();
      m = static_cast<u128>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

/// Uniform integer in [lo, hi].
inline long uniform_int(Rng& rng, long lo, long hi) {
  if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
  auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<long>(uniform_below(rng, span));
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// SplitMix64 finalizer; used to derive independent per-trial seeds.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Fisher-Yates; uniform over S_n.
inline Permutation random_permutation(int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("random_permutation: n must be >= 1");
  std::vector<int> images(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) images[static_cast<std::size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i) {
    auto j = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(i) + 1));
    std::swap(images[static_cast<std::size_t>(i)], images[static_cast<std::size_t>(j)]);
  }
  return Permutation::from_zero_based(std::move(images));
}

}  // namespace qapdist
