#include <chrono>

#include "maximin/colgen.hpp"

namespace maximin::colgen {

namespace {

// Columns are sampled with a stream separate from any sampling of x itself.
constexpr std::uint64_t kColumnSeedOffset = 0x9e3779b97f4a7c15ULL;

}  // namespace

MdsdResult binary_search_z(const Instance& instance, const ProbabilisticAssignment& x, const SearchOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  if (!is_feasible(instance, x)) throw std::invalid_argument("assignment is not feasible for the instance");

  MdsdResult result;
  const int ub = static_cast<int>(floor_int(mu(x)));
  result.upper_bound = ub;
  result.z_upper = ub;

  ColumnPool pool = initial_columns(instance, 0, options.initial_samples, options.seed + kColumnSeedOffset);
  ColgenOptions cg;
  cg.tolerance = options.tolerance;
  cg.budget = options.budget;
  cg.verify_columns = options.verify_columns;

  int best_feasible = -1;
  int fallback_k = ub + 1;
  auto test = [&](int k) {
    const Restriction r = cardinality_at_least(k);
    KOutcome o = options.framework == Framework::Rmp ? solve_mdsd_rmp(instance, x, r, pool, cg)
                                                     : solve_mdsd_alpha(instance, x, r, pool, cg);
    result.trace.push_back({k, o.objective, o.iterations, o.columns_added, o.decided, o.feasible});
    result.columns_generated += o.columns_added;
    if (o.feasible) {
      if (k > best_feasible) {
        best_feasible = k;
        result.decomposition = o.decomposition;
        result.best_objective = o.objective;
      }
    } else if (best_feasible < 0 && k < fallback_k) {
      // best approximation so far: the lowest k tried has the loosest columns
      result.decomposition = o.decomposition;
      result.best_objective = o.objective;
      fallback_k = k;
    }
    return o;
  };

  auto finish = [&](MdsdStatus status) {
    result.status = status;
    result.z = std::max(best_feasible, options.certified_lower_bound.value_or(best_feasible));
    if (result.z < 0) result.z = 0;
    result.pool_size = pool.size();
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
  };

  const KOutcome top = test(ub);
  if (!top.decided && !top.feasible) return finish(MdsdStatus::BudgetExhausted);
  if (top.feasible) return finish(MdsdStatus::Optimal);
  result.z_upper = ub - 1;
  if (top.exact_infeasible) {
    // no exact decomposition over Pareto-efficient matchings at any k
    result.z_upper = -1;
    return finish(MdsdStatus::NotDecomposable);
  }

  int lo = options.certified_lower_bound ? std::min(*options.certified_lower_bound, ub - 1) : 0;
  if (lo < 0) lo = 0;
  bool lo_known = false;
  int hi = ub - 1;
  while (lo < hi) {
    const int mid = lo + (hi - lo + 1) / 2;
    const KOutcome o = test(mid);
    if (!o.decided && !o.feasible) return finish(MdsdStatus::BudgetExhausted);
    if (o.feasible) {
      lo = mid;
      lo_known = true;
    } else {
      hi = mid - 1;
      result.z_upper = hi;
    }
  }
  if (!lo_known) {
    const KOutcome o = test(lo);
    if (!o.decided && !o.feasible) return finish(MdsdStatus::BudgetExhausted);
    if (!o.feasible) {
      result.z_upper = lo - 1;
      // k = 0 places no requirement on the matchings, so nothing decomposes x
      if (lo == 0) return finish(MdsdStatus::NotDecomposable);
      // a certified bound that fails to verify
      throw std::logic_error("certified lower bound " + std::to_string(lo) + " could not be verified");
    }
  }
  result.z_upper = lo;
  return finish(MdsdStatus::Optimal);
}

}  // namespace maximin::colgen
