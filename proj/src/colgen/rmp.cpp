#include <algorithm>

#include "maximin/colgen.hpp"

namespace maximin::colgen {

struct RmpMaster::Impl {
  int n = 0;
  int m = 0;
  std::vector<int> cover_row;  // per cell, -1 when dropped
  std::vector<int> dev_row;    // per cell, -1 when dropped
  int shared_dev_row = -1;     // super - s <= 0
  int convexity_row = -1;
  int s_var = -1;
  int super_var = -1;
  std::vector<int> column_var;
  std::vector<Matching> columns;
  std::unique_ptr<lp::SimplexSolver> solver;
};

RmpMaster::RmpMaster(const Instance& instance, const ProbabilisticAssignment& x) : impl_(std::make_unique<Impl>()) {
  auto& s = *impl_;
  s.n = instance.num_agents();
  s.m = instance.num_objects();
  const std::size_t cells = std::size_t(s.n) * s.m;
  s.cover_row.assign(cells, -1);
  s.dev_row.assign(cells, -1);

  lp::LinearProgram P;
  s.s_var = P.add_variable("s");
  s.super_var = P.add_variable("super");
  for (int i = 0; i < s.n; ++i) {
    for (int j = 0; j < s.m; ++j) {
      const std::size_t c = std::size_t(i) * s.m + j;
      const double v = to_double(x.at(i, j));
      if (!instance.acceptable(i, j)) {
        if (x.at(i, j) != 0) throw std::invalid_argument("assignment uses an unacceptable cell");
        continue;
      }
      const std::string tag = std::to_string(i) + "_" + std::to_string(j);
      if (x.at(i, j) > 0)
        s.cover_row[c] = P.add_constraint("cover_" + tag, {{s.super_var, 1.0}}, lp::Relation::GreaterEqual, v);
      if (x.at(i, j) < 1)
        s.dev_row[c] =
            P.add_constraint("dev_" + tag, {{s.super_var, 1.0}, {s.s_var, -1.0}}, lp::Relation::LessEqual, v);
    }
  }
  // the super-column deviates by its full weight, also on unusable cells
  s.shared_dev_row = P.add_constraint("dev_super", {{s.super_var, 1.0}, {s.s_var, -1.0}}, lp::Relation::LessEqual, 0.0);
  s.convexity_row = P.add_constraint("convexity", {{s.super_var, 1.0}}, lp::Relation::Equal, 1.0);
  P.set_objective(lp::Sense::Minimize, {{s.s_var, 1.0}});
  s.solver = std::make_unique<lp::SimplexSolver>(P);
}

RmpMaster::~RmpMaster() = default;
RmpMaster::RmpMaster(RmpMaster&&) noexcept = default;

const std::vector<Matching>& RmpMaster::columns() const { return impl_->columns; }

void RmpMaster::add_column(const Matching& matching) {
  auto& s = *impl_;
  if (matching.num_agents() != s.n) throw std::invalid_argument("column dimension mismatch");
  std::vector<lp::Term> entries;
  for (int i = 0; i < s.n; ++i) {
    const int j = matching.object_of(i);
    if (j == kOutside) continue;
    const std::size_t c = std::size_t(i) * s.m + j;
    if (s.cover_row[c] >= 0) entries.push_back({s.cover_row[c], 1.0});
    if (s.dev_row[c] >= 0) entries.push_back({s.dev_row[c], 1.0});
  }
  entries.push_back({s.convexity_row, 1.0});
  s.column_var.push_back(s.solver->add_column("lambda_" + std::to_string(s.columns.size()), 0.0, entries));
  s.columns.push_back(matching);
}

RmpSolution RmpMaster::solve() {
  auto& s = *impl_;
  const auto res = s.solver->solve();
  RmpSolution out;
  out.status = res.status;
  if (!res.optimal()) return out;
  out.s = res.primal[s.s_var];
  out.super_weight = res.primal[s.super_var];
  for (int var : s.column_var) out.weights.push_back(res.primal[var]);
  const std::size_t cells = std::size_t(s.n) * s.m;
  out.duals.u.assign(cells, 0.0);
  out.duals.v.assign(cells, 0.0);
  for (std::size_t c = 0; c < cells; ++c) {
    if (s.cover_row[c] >= 0) out.duals.u[c] = res.duals[s.cover_row[c]];
    if (s.dev_row[c] >= 0) out.duals.v[c] = res.duals[s.dev_row[c]];
  }
  out.duals.w = res.duals[s.convexity_row];
  return out;
}

RmpSolution solve_rmp(const Instance& instance, const ProbabilisticAssignment& x, const ColumnPool& pool, int k) {
  RmpMaster master(instance, x);
  for (std::size_t t = 0; t < pool.size(); ++t)
    if (pool.cardinality(t) >= k) master.add_column(pool.column(t));
  return master.solve();
}

namespace {

lp::SolverOptions pricing_options(const ColgenOptions& options) {
  lp::SolverOptions o;
  o.deadline = options.budget.deadline;
  return o;
}

void check_column(const Instance& instance, const Matching& mt) {
  if (!is_feasible(instance, mt) || !is_pareto_efficient(instance, mt))
    throw std::logic_error("pricing produced a matching that is not Pareto-efficient");
}

}  // namespace

KOutcome solve_mdsd_rmp(const Instance& instance, const ProbabilisticAssignment& x, const Restriction& restriction,
                        ColumnPool& pool, const ColgenOptions& options) {
  KOutcome out;
  RmpMaster master(instance, x);
  for (const auto& col : pool.columns())
    if (restriction.admits(col)) master.add_column(col);

  const std::size_t cells = std::size_t(instance.num_agents()) * instance.num_objects();
  PricingInput input;
  input.fixing = fixing_from(instance, x);
  input.restriction = &restriction;
  RmpSolution best;
  bool have = false;
  while (true) {
    if (options.budget.expired()) break;
    if (options.budget.max_iterations_per_k > 0 && out.iterations >= options.budget.max_iterations_per_k) break;
    const RmpSolution sol = master.solve();
    ++out.iterations;
    if (sol.status != lp::Status::Optimal) break;
    best = sol;
    have = true;
    if (sol.s <= options.tolerance && sol.super_weight <= options.tolerance) {
      out.decided = true;
      out.feasible = true;
      break;
    }
    input.cell_cost.assign(cells, 0.0);
    for (std::size_t c = 0; c < cells; ++c) input.cell_cost[c] = -(sol.duals.u[c] + sol.duals.v[c]);
    input.constant = -sol.duals.w;
    const PricingResult priced = solve_pricing(instance, input, options.tolerance, pricing_options(options));
    if (priced.column) {
      if (options.verify_columns) check_column(instance, *priced.column);
      const bool fresh = pool.add(*priced.column);
      const auto& cols = master.columns();
      if (!fresh && std::find(cols.begin(), cols.end(), *priced.column) != cols.end()) {
        // the master already prices this column out; nothing left to add
        out.decided = true;
        break;
      }
      master.add_column(*priced.column);
      ++out.columns_added;
      continue;
    }
    if (priced.status == lp::Status::Optimal || priced.status == lp::Status::Infeasible) out.decided = true;
    break;
  }
  if (have) {
    out.objective = best.s;
    out.decomposition = weights_to_decomposition(instance.num_agents(), instance.num_objects(), master.columns(),
                                                 best.weights);
    if (out.feasible) out.decomposition = refine_exact(x, out.decomposition);
  } else {
    out.objective = 1.0;
    out.decomposition = Decomposition{instance.num_agents(), instance.num_objects(), {}};
  }
  return out;
}

}  // namespace maximin::colgen
