#include <algorithm>

#include "maximin/colgen.hpp"

namespace maximin::colgen {

namespace {

struct AlphaMaster {
  int n = 0;
  int m = 0;
  std::vector<int> cell_row;  // -1 for cells no matching can use
  int good_row = -1;
  int convexity_row = -1;
  int alpha_var = -1;
  std::vector<int> artificials;
  std::vector<Matching> columns;
  std::vector<char> admitted;
  std::vector<int> column_var;
  std::unique_ptr<lp::SimplexSolver> solver;

  AlphaMaster(const Instance& instance, const ProbabilisticAssignment& x) {
    n = instance.num_agents();
    m = instance.num_objects();
    cell_row.assign(std::size_t(n) * m, -1);
    lp::LinearProgram P;
    alpha_var = P.add_variable("alpha", 0.0, 1.0);
    std::vector<lp::Term> phase_one;
    auto with_artificials = [&](const std::string& name) {
      const int plus = P.add_variable("ap_" + name);
      const int minus = P.add_variable("am_" + name);
      artificials.push_back(plus);
      artificials.push_back(minus);
      phase_one.push_back({plus, 1.0});
      phase_one.push_back({minus, 1.0});
      return std::vector<lp::Term>{{plus, 1.0}, {minus, -1.0}};
    };
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) {
        if (!instance.acceptable(i, j)) {
          if (x.at(i, j) != 0) throw std::invalid_argument("assignment uses an unacceptable cell");
          continue;
        }
        const std::string tag = std::to_string(i) + "_" + std::to_string(j);
        cell_row[std::size_t(i) * m + j] =
            P.add_constraint("cell_" + tag, with_artificials(tag), lp::Relation::Equal, to_double(x.at(i, j)));
      }
    good_row = P.add_constraint("good", {{alpha_var, -1.0}}, lp::Relation::GreaterEqual, 0.0);
    convexity_row = P.add_constraint("convexity", with_artificials("conv"), lp::Relation::Equal, 1.0);
    P.set_objective(lp::Sense::Minimize, phase_one);
    solver = std::make_unique<lp::SimplexSolver>(P);
  }

  void add(const Matching& mt, bool good) {
    std::vector<lp::Term> entries;
    for (int i = 0; i < n; ++i) {
      const int j = mt.object_of(i);
      if (j == kOutside) continue;
      const int row = cell_row[std::size_t(i) * m + j];
      if (row < 0) throw std::invalid_argument("column uses an unacceptable cell");
      entries.push_back({row, 1.0});
    }
    if (good) entries.push_back({good_row, 1.0});
    entries.push_back({convexity_row, 1.0});
    column_var.push_back(solver->add_column("lambda_" + std::to_string(columns.size()), 0.0, entries));
    columns.push_back(mt);
    admitted.push_back(good);
  }

  bool has(const Matching& mt) const { return std::find(columns.begin(), columns.end(), mt) != columns.end(); }
};

struct TwoPricing {
  std::vector<Matching> columns;
  bool converged = true;
};

// Reduced cost K + c.m (+ E when the matching is in the restriction).
TwoPricing price_both(const Instance& instance, const ProbabilisticAssignment& x, const Restriction& restriction,
                      const std::vector<double>& cost, double constant, double extra, const ColgenOptions& options) {
  TwoPricing out;
  lp::SolverOptions lp_options;
  lp_options.deadline = options.budget.deadline;
  const Restriction all = unrestricted();
  PricingInput input;
  input.cell_cost = cost;
  input.constant = constant;
  input.fixing = fixing_from(instance, x);
  input.restriction = &all;
  const PricingResult first = solve_pricing(instance, input, options.tolerance, lp_options);
  if (first.status != lp::Status::Optimal && first.status != lp::Status::Infeasible) out.converged = false;
  if (first.best) {
    const double value = first.value + (restriction.admits(*first.best) ? extra : 0.0);
    if (value < -options.tolerance) out.columns.push_back(*first.best);
  }
  if (extra < -1e-12) {
    input.restriction = &restriction;
    input.constant = constant + extra;
    const PricingResult second = solve_pricing(instance, input, options.tolerance, lp_options);
    if (second.status != lp::Status::Optimal && second.status != lp::Status::Infeasible) out.converged = false;
    if (second.column && (out.columns.empty() || !(out.columns.front() == *second.column)))
      out.columns.push_back(*second.column);
  }
  return out;
}

}  // namespace

KOutcome solve_mdsd_alpha(const Instance& instance, const ProbabilisticAssignment& x, const Restriction& restriction,
                          ColumnPool& pool, const ColgenOptions& options) {
  KOutcome out;
  AlphaMaster master(instance, x);
  for (const auto& col : pool.columns()) master.add(col, restriction.admits(col));
  const std::size_t cells = std::size_t(instance.num_agents()) * instance.num_objects();

  bool phase_two = false;
  std::vector<double> weights;
  bool have = false;
  auto out_of_budget = [&] {
    return options.budget.expired() ||
           (options.budget.max_iterations_per_k > 0 && out.iterations >= options.budget.max_iterations_per_k);
  };

  while (!out_of_budget()) {
    const auto res = master.solver->solve();
    ++out.iterations;
    if (!res.optimal()) break;
    weights.clear();
    for (int var : master.column_var) weights.push_back(res.primal[var]);
    if (phase_two) {
      have = true;
      out.objective = res.primal[master.alpha_var];
      if (out.objective >= 1.0 - options.tolerance) {
        out.decided = out.feasible = true;
        break;
      }
    }

    std::vector<double> cost(cells, 0.0);
    double constant, extra;
    const double w = res.duals[master.convexity_row];
    const double v = res.duals[master.good_row];
    if (!phase_two) {
      for (std::size_t c = 0; c < cells; ++c)
        if (master.cell_row[c] >= 0) cost[c] = -res.duals[master.cell_row[c]];
      constant = -w;
      extra = -v;
    } else {
      for (std::size_t c = 0; c < cells; ++c)
        if (master.cell_row[c] >= 0) cost[c] = res.duals[master.cell_row[c]];
      constant = w;
      extra = v;
    }
    const TwoPricing priced = price_both(instance, x, restriction, cost, constant, extra, options);
    bool added = false;
    for (const auto& col : priced.columns) {
      if (options.verify_columns && !is_pareto_efficient(instance, col))
        throw std::logic_error("pricing produced a matching that is not Pareto-efficient");
      pool.add(col);
      if (master.has(col)) continue;
      master.add(col, restriction.admits(col));
      ++out.columns_added;
      added = true;
    }
    if (added) continue;
    if (!priced.converged) break;

    if (!phase_two) {
      if (res.objective > options.tolerance) {
        out.decided = true;
        out.exact_infeasible = true;
        out.objective = 0.0;
        break;
      }
      for (int a : master.artificials) master.solver->set_bounds(a, 0.0, std::max(0.0, res.primal[a]) + 1e-12);
      master.solver->set_objective(lp::Sense::Maximize, {{master.alpha_var, 1.0}});
      phase_two = true;
      continue;
    }
    out.decided = true;
    out.feasible = out.objective >= 1.0 - options.tolerance;
    break;
  }

  if (have) {
    std::vector<double> kept = weights;
    if (out.feasible)
      for (std::size_t t = 0; t < kept.size(); ++t)
        if (!master.admitted[t]) kept[t] = 0.0;
    out.decomposition = weights_to_decomposition(instance.num_agents(), instance.num_objects(), master.columns, kept);
    if (out.feasible) out.decomposition = refine_exact(x, out.decomposition);
  } else {
    out.decomposition = Decomposition{instance.num_agents(), instance.num_objects(), {}};
  }
  return out;
}

}  // namespace maximin::colgen
