#pragma once

#include <cstdint>

#include "maximin/core.hpp"

namespace maximin {

struct RsdEstimate {
  ProbabilisticAssignment assignment;
  // Sampled: number of orderings drawn. Exact: number of distinct orderings
  // of preference types evaluated (agents with identical lists are
  // interchangeable, so each stands for the same number of full orderings).
  long long sample_count = 0;
  std::uint64_t seed = 0;
  bool exact = false;
};

inline constexpr long long kDefaultRsdOrderingLimit = 362'880;  // 9!

// Exact RSD assignment, averaging serial dictatorship over every ordering.
// Throws std::length_error when the number of distinct type orderings
// exceeds `ordering_limit`.
RsdEstimate rsd_exact(const Instance& instance, long long ordering_limit = kDefaultRsdOrderingLimit);

// Number of distinct type orderings rsd_exact would evaluate (saturates at
// LLONG_MAX).
long long rsd_exact_orderings(const Instance& instance);

// Average of serial dictatorship over `samples` uniform orderings. The draws
// are split into `shards` consecutive blocks; block s uses seed + s. Threads
// only change wall time, never the result.
RsdEstimate rsd_sampled(const Instance& instance, long long samples, std::uint64_t seed, int shards = 1,
                        int threads = 1);

// Simultaneous eating at unit speed over [0, 1], exact.
ProbabilisticAssignment probabilistic_serial(const Instance& instance);

// First-order stochastic dominance of every agent's row over every other row
// along her own preference list.
bool is_envy_free(const Instance& instance, const ProbabilisticAssignment& x);

}  // namespace maximin
