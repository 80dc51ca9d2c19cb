#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace maximin {

// All sampling goes through mt19937_64 (fully specified by the standard) and
// the two helpers below, so sequences are identical on every platform.
// std::uniform_int_distribution is avoided because its algorithm is
// implementation-defined.
using Rng = std::mt19937_64;

// Uniform integer in [0, bound), bound > 0, by rejection.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t r;
  do r = rng();
  while (r >= limit);
  return r % bound;
}

// Uniform double in [0, 1) from the top 53 bits.
inline double uniform_unit(Rng& rng) { return double(rng() >> 11) * 0x1.0p-53; }

// Fisher-Yates, last position first.
inline void shuffle_in_place(Rng& rng, std::vector<int>& items) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = uniform_below(rng, i);
    std::swap(items[i - 1], items[j]);
  }
}

inline std::vector<int> random_ordering(Rng& rng, int n) {
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  shuffle_in_place(rng, order);
  return order;
}

}  // namespace maximin
