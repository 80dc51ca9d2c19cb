#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "maximin/core.hpp"
#include "maximin/lp.hpp"
#include "maximin/pe_model.hpp"

namespace maximin::colgen {

inline constexpr double kDefaultTolerance = 1e-4;
inline constexpr long long kDefaultInitialSamples = 10'000;

struct Budget {
  std::optional<std::chrono::steady_clock::time_point> deadline;
  long max_iterations_per_k = 0;  // master/pricing rounds per tested k, 0 = unlimited

  static Budget seconds(double limit);
  bool expired() const { return deadline && std::chrono::steady_clock::now() > *deadline; }
};

// Deduplicated set of Pareto-efficient matchings.
class ColumnPool {
 public:
  bool add(const Matching& matching);  // false when already present
  bool contains(const Matching& matching) const { return index_.count(matching) > 0; }
  std::size_t size() const { return columns_.size(); }
  const Matching& column(std::size_t t) const { return columns_.at(t); }
  int cardinality(std::size_t t) const { return cardinality_.at(t); }
  const std::vector<Matching>& columns() const { return columns_; }

 private:
  std::vector<Matching> columns_;
  std::vector<int> cardinality_;
  std::map<Matching, std::size_t> index_;
};

// Serial dictatorship over `samples` random orderings, keeping the distinct
// matchings that assign at least `min_cardinality` agents.
ColumnPool initial_columns(const Instance& instance, int min_cardinality, long long samples, std::uint64_t seed);

// The subset of PE matchings a decomposition may use: a pool filter plus the
// matching constraints the pricing problem needs to stay inside the subset.
struct Restriction {
  std::string label;
  std::function<bool(const Matching&)> admits;
  std::function<void(PeMatchingModel&)> constrain;
};

Restriction cardinality_at_least(int k);
Restriction unrestricted();

// Pricing: minimize constant + sum cost_ij m_ij over the PE matchings that
// satisfy `restriction` and `fixing`.
struct PricingInput {
  std::vector<double> cell_cost;  // agents x objects row-major
  double constant = 0.0;
  std::vector<CellFix> fixing;    // empty = none
  const Restriction* restriction = nullptr;
  // false: branch-and-bound prunes everything that cannot reach -tolerance,
  // so `best` is only guaranteed optimal when it is a column
  bool exact_value = false;
};

struct PricingResult {
  lp::Status status = lp::Status::Infeasible;
  std::optional<Matching> best;    // optimal matching (see PricingInput::exact_value)
  double value = lp::kInfinity;    // its objective (+inf if no matching)
  std::optional<Matching> column;  // set iff value < -tolerance
};

PricingResult solve_pricing(const Instance& instance, const PricingInput& input, double tolerance = kDefaultTolerance,
                            const lp::SolverOptions& options = {});

// m_ij fixed to 0 / 1 where x_ij is 0 / 1.
std::vector<CellFix> fixing_from(const Instance& instance, const ProbabilisticAssignment& x);

// Duals of the restricted master, dense over agents x objects (zero on rows
// that are not present).
struct RmpDuals {
  std::vector<double> u;  // coverage rows sum lambda m >= x
  std::vector<double> v;  // deviation rows sum lambda m - s <= x
  double w = 0.0;         // convexity row
};

struct RmpSolution {
  lp::Status status = lp::Status::NumericalFailure;
  double s = 0.0;
  double super_weight = 0.0;
  std::vector<double> weights;  // aligned with RmpMaster::columns()
  RmpDuals duals;
};

// min s such that the lottery covers x from above and exceeds it by at most
// s anywhere. An all-ones super-column keeps it feasible.
class RmpMaster {
 public:
  RmpMaster(const Instance& instance, const ProbabilisticAssignment& x);
  ~RmpMaster();
  RmpMaster(RmpMaster&&) noexcept;

  void add_column(const Matching& matching);
  RmpSolution solve();
  const std::vector<Matching>& columns() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

RmpSolution solve_rmp(const Instance& instance, const ProbabilisticAssignment& x, const ColumnPool& pool, int k);

// Reduced-cost pricing for the master above: min -sum m(u+v) - w over PE
// matchings with at least k agents, cells pinned where x is 0 or 1.
PricingResult price_pe_matching(const Instance& instance, const ProbabilisticAssignment& x, const RmpDuals& duals,
                                int k, double tolerance = kDefaultTolerance, const lp::SolverOptions& options = {});

struct ColgenOptions {
  double tolerance = kDefaultTolerance;
  Budget budget;
  bool verify_columns = false;  // re-check every priced column with the envy-graph test
};

struct KOutcome {
  bool decided = false;   // feasibility settled (witness found or pricing converged)
  bool feasible = false;
  double objective = 0.0;  // s* or alpha*
  int iterations = 0;
  int columns_added = 0;
  bool exact_infeasible = false;  // alpha: exact decomposition rows cannot be met
  Decomposition decomposition;
};

// Column generation on the deviation master restricted to `restriction`; priced columns are
// added to `pool`.
KOutcome solve_mdsd_rmp(const Instance& instance, const ProbabilisticAssignment& x, const Restriction& restriction,
                        ColumnPool& pool, const ColgenOptions& options = {});

// Column generation on the alpha master: exact decomposition over all PE
// matchings, maximizing the weight on matchings inside `restriction`.
KOutcome solve_mdsd_alpha(const Instance& instance, const ProbabilisticAssignment& x, const Restriction& restriction,
                          ColumnPool& pool, const ColgenOptions& options = {});

enum class Framework { Rmp, Alpha };
enum class MdsdStatus { Optimal, BudgetExhausted, NotDecomposable };
const char* to_string(Framework f);
const char* to_string(MdsdStatus s);

struct TraceEntry {
  int k = 0;
  double objective = 0.0;
  int iterations = 0;
  int columns_added = 0;
  bool decided = false;
  bool feasible = false;
};

struct MdsdResult {
  MdsdStatus status = MdsdStatus::BudgetExhausted;
  int z = 0;        // largest certified k (valid when status is Optimal)
  int z_upper = 0;  // no decomposition exists above this
  int upper_bound = 0;  // floor(mu)
  Decomposition decomposition;
  double best_objective = 0.0;  // s* (rmp) or alpha* (alpha) of the reported decomposition
  std::vector<TraceEntry> trace;
  long long columns_generated = 0;
  std::size_t pool_size = 0;
  double seconds = 0.0;
};

struct SearchOptions {
  Framework framework = Framework::Rmp;
  double tolerance = kDefaultTolerance;
  long long initial_samples = kDefaultInitialSamples;
  std::uint64_t seed = 1;
  // A k at which x is known to decompose (e.g. p- for exact RSD).
  std::optional<int> certified_lower_bound;
  Budget budget;
  bool verify_columns = false;
};

MdsdResult binary_search_z(const Instance& instance, const ProbabilisticAssignment& x, const SearchOptions& options);

// Lottery from master weights: drop weights below `threshold`, approximate the
// rest by fractions and renormalize to sum exactly to one.
Decomposition weights_to_decomposition(int num_agents, int num_objects, const std::vector<Matching>& columns,
                                       const std::vector<double>& weights, double threshold = 1e-9);

// Exact weights on the same matchings when the linear system
// sum w_t M_t = x, sum w_t = 1 has a nonnegative solution near the given
// weights; otherwise `approx` unchanged.
Decomposition refine_exact(const ProbabilisticAssignment& x, const Decomposition& approx);

}  // namespace maximin::colgen
