#pragma once

#include <map>
#include <memory>
#include <vector>

#include "maximin/colgen.hpp"
#include "maximin/core.hpp"

namespace maximin {

// Agents who strictly prefer their allocation in `a` to the one in `b`.
int phi(const Instance& instance, const Matching& a, const Matching& b);

// nu(i, j) relative to `matching`: +1 if agent i prefers j to her current
// allocation, -1 if she prefers her allocation, 0 otherwise. Columns are the
// objects followed by the outside option; unacceptable objects get 0 (they
// can never be assigned).
std::vector<int> comparison_weights(const Instance& instance, const Matching& matching);

// max over feasible M' of phi(M', M) - phi(M, M'), via the assignment LP with
// the outside option as an object of capacity |N|.
int unpopularity_margin(const Instance& instance, const Matching& matching);

// Largest margin over the matchings of a decomposition.
int worst_case_margin(const Instance& instance, const Decomposition& decomposition);

// Memo of margins shared by the restrictions of one search.
using MarginCache = std::shared_ptr<std::map<Matching, int>>;

// Restriction to matchings with unpopularity margin at most omega. In the
// pricing model the margin LP's dual is added as constraints: free alpha_i
// per agent, alpha_j >= 0 per object and for the outside option,
//   alpha_i + alpha_j >= nu_ij(m)            for acceptable j and the outside option
//   sum alpha_i + sum q_j alpha_j + |N| alpha_out <= omega
// where nu_ij(m) is linear in the agent's assignment row.
colgen::Restriction bounded_margin_block(const Instance& instance, int omega, MarginCache cache = nullptr);

struct MarginTraceEntry {
  int omega = 0;
  double objective = 0.0;
  int iterations = 0;
  int columns_added = 0;
  bool decided = false;
  bool feasible = false;
};

struct MarginResult {
  colgen::MdsdStatus status = colgen::MdsdStatus::BudgetExhausted;
  int omega = 0;        // smallest certified worst-case margin (when Optimal)
  int omega_lower = 0;  // no decomposition has a smaller worst case
  Decomposition decomposition;
  std::vector<MarginTraceEntry> trace;
  std::size_t pool_size = 0;
  double seconds = 0.0;
};

struct MarginSearchOptions {
  double tolerance = colgen::kDefaultTolerance;
  long long initial_samples = colgen::kDefaultInitialSamples;
  std::uint64_t seed = 1;
  colgen::Budget budget;
};

// Bisection on omega over [0, |N|] with the deviation-master column generation.
MarginResult binary_search_margin(const Instance& instance, const ProbabilisticAssignment& x,
                                  const MarginSearchOptions& options = {});

}  // namespace maximin
