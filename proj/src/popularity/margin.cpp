#include <chrono>
#include <cmath>
#include <stdexcept>

#include "maximin/lp.hpp"
#include "maximin/popularity.hpp"

namespace maximin {

int phi(const Instance& instance, const Matching& a, const Matching& b) {
  if (a.num_agents() != instance.num_agents() || b.num_agents() != instance.num_agents())
    throw std::invalid_argument("matching size does not match the instance");
  int count = 0;
  for (int i = 0; i < instance.num_agents(); ++i)
    if (instance.prefers(i, a.object_of(i), b.object_of(i))) ++count;
  return count;
}

std::vector<int> comparison_weights(const Instance& instance, const Matching& matching) {
  const int n = instance.num_agents(), m = instance.num_objects();
  std::vector<int> nu(std::size_t(n) * (m + 1), 0);
  for (int i = 0; i < n; ++i) {
    const int held = matching.object_of(i);
    for (int j = 0; j <= m; ++j) {
      const int obj = j == m ? kOutside : j;
      if (obj != kOutside && !instance.acceptable(i, obj)) continue;
      if (instance.prefers(i, obj, held))
        nu[std::size_t(i) * (m + 1) + j] = 1;
      else if (instance.prefers(i, held, obj))
        nu[std::size_t(i) * (m + 1) + j] = -1;
    }
  }
  return nu;
}

int unpopularity_margin(const Instance& instance, const Matching& matching) {
  if (!is_feasible(instance, matching)) throw std::invalid_argument("matching is not feasible");
  const int n = instance.num_agents(), m = instance.num_objects();
  const auto nu = comparison_weights(instance, matching);
  lp::LinearProgram P;
  std::vector<lp::Term> objective;
  std::vector<std::vector<lp::Term>> columns(m);
  for (int i = 0; i < n; ++i) {
    std::vector<lp::Term> row;
    for (int j : instance.prefs(i)) {
      const int v = P.add_variable("m_" + std::to_string(i) + "_" + std::to_string(j), 0.0, 1.0);
      row.push_back({v, 1.0});
      columns[j].push_back({v, 1.0});
      if (nu[std::size_t(i) * (m + 1) + j] != 0) objective.push_back({v, double(nu[std::size_t(i) * (m + 1) + j])});
    }
    // outside option: capacity |N| never binds
    const int out = P.add_variable("m_" + std::to_string(i) + "_out", 0.0, 1.0);
    row.push_back({out, 1.0});
    if (nu[std::size_t(i) * (m + 1) + m] != 0) objective.push_back({out, double(nu[std::size_t(i) * (m + 1) + m])});
    P.add_constraint("agent_" + std::to_string(i), row, lp::Relation::Equal, 1.0);
  }
  for (int j = 0; j < m; ++j)
    if (!columns[j].empty())
      P.add_constraint("object_" + std::to_string(j), columns[j], lp::Relation::LessEqual, instance.capacity(j));
  P.set_objective(lp::Sense::Maximize, objective);
  const auto res = lp::solve_lp(P);
  if (!res.optimal()) throw std::runtime_error("margin LP did not solve to optimality");
  return static_cast<int>(std::lround(res.objective));
}

int worst_case_margin(const Instance& instance, const Decomposition& decomposition) {
  int worst = 0;
  for (const auto& t : decomposition.terms) worst = std::max(worst, unpopularity_margin(instance, t.matching));
  return worst;
}

colgen::Restriction bounded_margin_block(const Instance& instance, int omega, MarginCache cache) {
  if (omega < 0) throw std::invalid_argument("omega must be nonnegative");
  if (!cache) cache = std::make_shared<std::map<Matching, int>>();
  colgen::Restriction r;
  r.label = "margin<=" + std::to_string(omega);
  r.admits = [&instance, omega, cache](const Matching& mt) {
    auto it = cache->find(mt);
    if (it == cache->end()) it = cache->emplace(mt, unpopularity_margin(instance, mt)).first;
    return it->second <= omega;
  };
  r.constrain = [&instance, omega](PeMatchingModel& model) {
    auto& P = model.program();
    const int n = instance.num_agents(), m = instance.num_objects();
    std::vector<lp::Term> dual_objective;
    std::vector<int> alpha_agent(n), alpha_object(m);
    for (int i = 0; i < n; ++i) {
      alpha_agent[i] = P.add_variable("alpha_a" + std::to_string(i), -lp::kInfinity, lp::kInfinity);
      dual_objective.push_back({alpha_agent[i], 1.0});
    }
    for (int j = 0; j < m; ++j) {
      alpha_object[j] = P.add_variable("alpha_o" + std::to_string(j));
      dual_objective.push_back({alpha_object[j], double(instance.capacity(j))});
    }
    const int alpha_out = P.add_variable("alpha_out");
    dual_objective.push_back({alpha_out, double(n)});
    P.add_constraint("margin_bound", dual_objective, lp::Relation::LessEqual, omega);

    for (int i = 0; i < n; ++i) {
      const auto& prefs = instance.prefs(i);
      // nu_i,out(m) = -sum_k m_ik
      std::vector<lp::Term> out_row{{alpha_agent[i], 1.0}, {alpha_out, 1.0}};
      for (int k : prefs) out_row.push_back({model.assignment_var(i, k), 1.0});
      P.add_constraint("margin_dual_" + std::to_string(i) + "_out", out_row, lp::Relation::GreaterEqual, 0.0);
      // nu_ij(m) = (1 - sum_k m_ik) + sum_{k below j} m_ik - sum_{k above j} m_ik
      //          = 1 - 2 sum_{k above j} m_ik - m_ij
      for (std::size_t r = 0; r < prefs.size(); ++r) {
        const int j = prefs[r];
        std::vector<lp::Term> row{{alpha_agent[i], 1.0}, {alpha_object[j], 1.0}, {model.assignment_var(i, j), 1.0}};
        for (std::size_t a = 0; a < r; ++a) row.push_back({model.assignment_var(i, prefs[a]), 2.0});
        P.add_constraint("margin_dual_" + std::to_string(i) + "_" + std::to_string(j), row,
                         lp::Relation::GreaterEqual, 1.0);
      }
    }
  };
  return r;
}

MarginResult binary_search_margin(const Instance& instance, const ProbabilisticAssignment& x,
                                  const MarginSearchOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  if (!is_feasible(instance, x)) throw std::invalid_argument("assignment is not feasible for the instance");
  MarginResult result;
  colgen::ColumnPool pool = colgen::initial_columns(instance, 0, options.initial_samples, options.seed);
  colgen::ColgenOptions cg;
  cg.tolerance = options.tolerance;
  cg.budget = options.budget;
  auto cache = std::make_shared<std::map<Matching, int>>();

  auto finish = [&](colgen::MdsdStatus status) {
    result.status = status;
    result.pool_size = pool.size();
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
  };
  auto test = [&](int omega) {
    const auto r = bounded_margin_block(instance, omega, cache);
    colgen::KOutcome o = colgen::solve_mdsd_rmp(instance, x, r, pool, cg);
    result.trace.push_back({omega, o.objective, o.iterations, o.columns_added, o.decided, o.feasible});
    if (o.feasible) result.decomposition = o.decomposition;
    return o;
  };

  // margins never exceed |N|, so this admits every Pareto-efficient matching
  int hi = instance.num_agents();
  const auto top = test(hi);
  if (!top.feasible) return finish(top.decided ? colgen::MdsdStatus::NotDecomposable : colgen::MdsdStatus::BudgetExhausted);
  // the reported decomposition may already do better than |N|
  hi = worst_case_margin(instance, result.decomposition);
  int lo = 0;
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    const auto o = test(mid);
    if (!o.decided && !o.feasible) {
      result.omega = hi;
      result.omega_lower = lo;
      return finish(colgen::MdsdStatus::BudgetExhausted);
    }
    if (o.feasible)
      hi = std::min(mid, worst_case_margin(instance, o.decomposition));
    else
      lo = mid + 1;
  }
  // keep the decomposition that certified hi
  if (worst_case_margin(instance, result.decomposition) != hi) {
    const auto o = test(hi);
    if (!o.feasible) throw std::logic_error("margin bound could not be re-certified");
  }
  result.omega = hi;
  result.omega_lower = hi;
  return finish(colgen::MdsdStatus::Optimal);
}

}  // namespace maximin
