#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "maximin/lp.hpp"

namespace maximin::lp {

namespace {

struct BoundChange {
  int var;
  double lower;
  double upper;
};

struct Node {
  double bound;  // LP bound in minimization form
  long id;
  std::vector<BoundChange> changes;
};

struct NodeOrder {
  // Best bound first; among equal bounds the most recently created node.
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id < b.id;
  }
};

bool objective_is_integral(const LinearProgram& program) {
  if (std::floor(program.objective_constant()) != program.objective_constant()) return false;
  for (const auto& t : program.objective()) {
    if (t.coef == 0.0) continue;
    if (!program.variable(t.var).integer) return false;
    if (std::floor(t.coef) != t.coef) return false;
  }
  return true;
}

double evaluate(const LinearProgram& program, const std::vector<double>& x) {
  double obj = program.objective_constant();
  for (const auto& t : program.objective()) obj += t.coef * x[t.var];
  return obj;
}

}  // namespace

SolveResult solve_mip(const LinearProgram& program, const SolverOptions& options) {
  program.validate();
  const double sign = program.sense() == Sense::Minimize ? 1.0 : -1.0;
  const bool integral_objective = objective_is_integral(program);
  const double int_tol = options.integrality_tol;
  const int nv = program.num_variables();

  LinearProgram relaxed;
  std::vector<double> base_lo(nv), base_up(nv);
  for (int j = 0; j < nv; ++j) {
    const auto& v = program.variable(j);
    double lo = v.lower, up = v.upper;
    if (v.integer) {
      // Integer bounds can be tightened to the enclosed integers.
      if (std::isfinite(lo)) lo = std::ceil(lo - int_tol);
      if (std::isfinite(up)) up = std::floor(up + int_tol);
      if (lo > up) {
        SolveResult infeasible;
        infeasible.status = Status::Infeasible;
        return infeasible;
      }
    }
    base_lo[j] = lo;
    base_up[j] = up;
    relaxed.add_variable(v.name, lo, up, false);
  }
  for (const auto& c : program.constraints()) relaxed.add_constraint(c.name, c.terms, c.relation, c.rhs);
  relaxed.set_objective(program.sense(), program.objective(), program.objective_constant());

  auto node_bound = [&](double objective) {
    double b = sign * objective;
    if (integral_objective) b = std::ceil(b - 1e-6);
    return b;
  };

  SolveResult best;
  best.status = Status::Infeasible;
  double incumbent = kInfinity;  // minimization form
  // nodes must beat this to be explored
  double prune_at = kInfinity;
  if (options.cutoff) prune_at = sign * *options.cutoff;
  auto accept = [&](std::vector<double> x) {
    for (int j = 0; j < nv; ++j)
      if (program.variable(j).integer) x[j] = std::round(x[j]);
    const double obj = evaluate(program, x);
    if (sign * obj >= std::min(incumbent, prune_at) - 1e-9) return;
    incumbent = sign * obj;
    best.status = Status::Optimal;
    best.primal = std::move(x);
    best.objective = obj;
  };
  if (!options.incumbent_hint.empty() && static_cast<int>(options.incumbent_hint.size()) == nv &&
      max_violation(program, options.incumbent_hint) <= 1e-6) {
    bool integral = true;
    for (int j = 0; j < nv && integral; ++j)
      if (program.variable(j).integer)
        integral = std::abs(options.incumbent_hint[j] - std::round(options.incumbent_hint[j])) <= int_tol;
    if (integral) accept(options.incumbent_hint);
  }
  auto threshold = [&] { return std::min(incumbent, prune_at) - 1e-9; };

  long nodes = 0;
  long lp_iterations = 0;
  bool root_integral = false;
  bool stopped_early = false;
  Status stop_status = Status::Optimal;

  SolverOptions lp_options = options;
  lp_options.cutoff.reset();
  lp_options.incumbent_hint.clear();
  SimplexSolver solver(relaxed, lp_options);
  std::vector<double> cur_lo = base_lo, cur_up = base_up;
  std::vector<double> want_lo, want_up;

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  open.push(Node{-kInfinity, 0, {}});
  long next_id = 1;

  while (!open.empty()) {
    Node node = open.top();
    open.pop();
    if (node.bound >= threshold()) continue;
    if (options.deadline && std::chrono::steady_clock::now() > *options.deadline) {
      stopped_early = true;
      stop_status = Status::TimeLimit;
      open.push(std::move(node));
      break;
    }
    if (options.max_nodes > 0 && nodes >= options.max_nodes) {
      stopped_early = true;
      stop_status = Status::IterationLimit;
      open.push(std::move(node));
      break;
    }

    want_lo = base_lo;
    want_up = base_up;
    for (const auto& ch : node.changes) {
      want_lo[ch.var] = ch.lower;
      want_up[ch.var] = ch.upper;
    }
    for (int j = 0; j < nv; ++j) {
      if (want_lo[j] == cur_lo[j] && want_up[j] == cur_up[j]) continue;
      solver.set_bounds(j, want_lo[j], want_up[j]);
      cur_lo[j] = want_lo[j];
      cur_up[j] = want_up[j];
    }
    const SolveResult res = solver.solve();
    ++nodes;
    lp_iterations += res.iterations;

    if (res.status == Status::Infeasible) continue;
    if (res.status == Status::Unbounded) {
      if (nodes == 1) {
        SolveResult out;
        out.status = Status::Unbounded;
        out.nodes = nodes;
        return out;
      }
      continue;
    }
    if (res.status != Status::Optimal) {
      stopped_early = true;
      stop_status = res.status;
      open.push(std::move(node));
      break;
    }

    const double bound = node_bound(res.objective);
    if (bound >= threshold()) continue;

    int branch_var = -1;
    int best_priority = 0;
    double best_frac = -1.0;
    for (int j = 0; j < nv; ++j) {
      const auto& v = program.variable(j);
      if (!v.integer) continue;
      const double x = res.primal[j];
      const double dist = std::min(x - std::floor(x), std::ceil(x) - x);
      if (dist <= int_tol) continue;
      if (branch_var < 0 || v.priority > best_priority ||
          (v.priority == best_priority && dist > best_frac + 1e-12)) {
        best_priority = v.priority;
        best_frac = dist;
        branch_var = j;
      }
    }
    if (nodes == 1) root_integral = branch_var < 0;

    if (branch_var < 0) {
      accept(res.primal);
      continue;
    }

    const double x = res.primal[branch_var];
    Node down{bound, next_id++, node.changes};
    down.changes.push_back({branch_var, cur_lo[branch_var], std::floor(x)});
    Node up{bound, next_id++, node.changes};
    up.changes.push_back({branch_var, std::ceil(x), cur_up[branch_var]});
    open.push(std::move(down));
    open.push(std::move(up));
  }

  double proven = incumbent;
  if (stopped_early) {
    double open_best = std::min(incumbent, prune_at);
    while (!open.empty()) {
      open_best = std::min(open_best, open.top().bound);
      open.pop();
    }
    proven = open_best;
  }

  SolveResult out = best;
  out.nodes = nodes;
  out.iterations = lp_iterations;
  out.root_integral = root_integral;
  out.has_incumbent = std::isfinite(incumbent);
  out.duals.clear();
  out.reduced_costs.clear();
  if (stopped_early) {
    out.status = stop_status;
    out.bound = sign * proven;
    if (!out.has_incumbent) out.primal.clear();
    return out;
  }
  if (!out.has_incumbent) {
    out.status = Status::Infeasible;
    out.primal.clear();
    return out;
  }
  out.status = Status::Optimal;
  out.bound = out.objective;
  return out;
}

}  // namespace maximin::lp
