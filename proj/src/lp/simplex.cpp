#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "maximin/lp.hpp"

namespace maximin::lp {

namespace {

enum class At : unsigned char { Lower, Upper, Zero, Basic };

constexpr double kPivotTol = 1e-9;
constexpr double kDualPivotTol = 1e-7;
constexpr int kDegenerateSwitch = 50;

}  // namespace

// Internal column order: row slacks [0, m), row artificials [m, 2m),
// structural columns from 2m on. The tableau is stored column-major so that
// appending a column is cheap.
struct SimplexSolver::Impl {
  LinearProgram program;
  SolverOptions options;

  int m = 0;
  std::vector<std::vector<double>> original;  // column-major constraint matrix
  std::vector<std::vector<double>> tableau;   // B^{-1} * original
  std::vector<double> rhs;
  std::vector<double> lower, upper, cost, value, reduced;
  std::vector<At> state;
  std::vector<int> basis;  // basis[row] = column
  bool warm = false;
  bool phase_one = false;
  long iterations = 0;
  long total = 0;

  int ncols() const { return static_cast<int>(original.size()); }
  int structural(int var) const { return 2 * m + var; }

  explicit Impl(const LinearProgram& p, const SolverOptions& o) : program(p), options(o) {
    program.validate();
    m = program.num_constraints();
    rhs.resize(m);
    for (int i = 0; i < m; ++i) rhs[i] = program.constraint(i).rhs;

    for (int i = 0; i < m; ++i) {
      std::vector<double> col(m, 0.0);
      col[i] = 1.0;
      original.push_back(col);
      const auto rel = program.constraint(i).relation;
      lower.push_back(rel == Relation::GreaterEqual ? -kInfinity : 0.0);
      upper.push_back(rel == Relation::LessEqual ? kInfinity : 0.0);
    }
    for (int i = 0; i < m; ++i) {
      std::vector<double> col(m, 0.0);
      col[i] = 1.0;
      original.push_back(col);
      lower.push_back(0.0);
      upper.push_back(0.0);
    }
    for (int j = 0; j < program.num_variables(); ++j) {
      original.emplace_back(m, 0.0);
      lower.push_back(program.variable(j).lower);
      upper.push_back(program.variable(j).upper);
    }
    for (int i = 0; i < m; ++i)
      for (const auto& t : program.constraint(i).terms) original[structural(t.var)][i] += t.coef;
  }

  std::vector<double> phase_two_costs() const {
    std::vector<double> c(ncols(), 0.0);
    const double sign = program.sense() == Sense::Minimize ? 1.0 : -1.0;
    for (const auto& t : program.objective()) c[structural(t.var)] += sign * t.coef;
    return c;
  }

  static double resting_value(double lo, double up, At& where) {
    if (std::isfinite(lo)) {
      where = At::Lower;
      return lo;
    }
    if (std::isfinite(up)) {
      where = At::Upper;
      return up;
    }
    where = At::Zero;
    return 0.0;
  }

  void cold_start() {
    const int n = ncols();
    state.assign(n, At::Lower);
    value.assign(n, 0.0);
    basis.assign(m, -1);
    for (int c = 2 * m; c < n; ++c) value[c] = resting_value(lower[c], upper[c], state[c]);
    for (int i = 0; i < m; ++i) {
      // artificials start fixed at zero; opened below where needed
      lower[m + i] = 0.0;
      upper[m + i] = 0.0;
      state[m + i] = At::Lower;
      state[i] = At::Lower;
      value[i] = 0.0;
      value[m + i] = 0.0;
    }
    std::vector<double> residual = rhs;
    for (int c = 2 * m; c < n; ++c) {
      if (value[c] == 0.0) continue;
      const auto& col = original[c];
      for (int i = 0; i < m; ++i) residual[i] -= col[i] * value[c];
    }
    tableau = original;
    for (int i = 0; i < m; ++i) {
      const double r = residual[i];
      if (r >= lower[i] && r <= upper[i]) {
        basis[i] = i;
        state[i] = At::Basic;
        value[i] = r;
        original[m + i][i] = 1.0;
        tableau[m + i].assign(m, 0.0);
        tableau[m + i][i] = 1.0;
        continue;
      }
      // Slack rests at 0 (every slack range contains 0); the artificial
      // carries the residual with a sign that keeps it nonnegative.
      const double sigma = r > 0 ? 1.0 : -1.0;
      original[m + i].assign(m, 0.0);
      original[m + i][i] = sigma;
      upper[m + i] = kInfinity;
      basis[i] = m + i;
      state[m + i] = At::Basic;
      value[m + i] = std::abs(r);
      state[i] = std::isfinite(lower[i]) ? At::Lower : At::Upper;
      // Row i of B^{-1} is sigma * e_i.
      for (int c = 0; c < n; ++c) tableau[c][i] = sigma * original[c][i];
    }
    warm = true;
  }

  void compute_reduced() {
    const int n = ncols();
    reduced.assign(n, 0.0);
    for (int c = 0; c < n; ++c) {
      if (state[c] == At::Basic) continue;
      double dot = 0.0;
      const auto& col = tableau[c];
      for (int r = 0; r < m; ++r) {
        const double cb = cost[basis[r]];
        if (cb != 0.0 && col[r] != 0.0) dot += cb * col[r];
      }
      reduced[c] = cost[c] - dot;
    }
  }

  bool deadline_passed() const {
    return options.deadline && std::chrono::steady_clock::now() > *options.deadline;
  }

  long iteration_cap() const {
    if (options.max_iterations > 0) return options.max_iterations;
    return 200L * (m + ncols()) + 10000;
  }

  void pivot(int row, int entering) {
    const std::vector<double> p = tableau[entering];
    const double piv = p[row];
    const double d_entering = reduced[entering];
    const int n = ncols();
    for (int c = 0; c < n; ++c) {
      auto& col = tableau[c];
      const double t = col[row];
      if (t == 0.0) continue;
      const double scaled = t / piv;
      for (int i = 0; i < m; ++i) {
        if (p[i] != 0.0) col[i] -= p[i] * scaled;
      }
      col[row] = scaled;
      reduced[c] -= d_entering * scaled;
    }
    // Clean the entering column to an exact unit vector.
    auto& ce = tableau[entering];
    std::fill(ce.begin(), ce.end(), 0.0);
    ce[row] = 1.0;
    reduced[entering] = 0.0;
  }

  enum class RunResult { Optimal, Unbounded, IterationLimit, TimeLimit };

  RunResult iterate() {
    const int n = ncols();
    int degenerate_run = 0;
    const double opt_tol = options.optimality_tol;
    while (true) {
      if (iterations >= iteration_cap()) return RunResult::IterationLimit;
      if ((iterations & 63) == 0 && deadline_passed()) return RunResult::TimeLimit;
      const bool bland = degenerate_run >= kDegenerateSwitch;

      int entering = -1;
      double direction = 0.0;
      double best = 0.0;
      for (int c = 0; c < n; ++c) {
        const At s = state[c];
        if (s == At::Basic || lower[c] == upper[c]) continue;
        const double d = reduced[c];
        double dir = 0.0;
        if (d < -opt_tol && (s == At::Lower || s == At::Zero)) dir = 1.0;
        else if (d > opt_tol && (s == At::Upper || s == At::Zero)) dir = -1.0;
        if (dir == 0.0) continue;
        if (bland) {
          entering = c;
          direction = dir;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          entering = c;
          direction = dir;
        }
      }
      if (entering < 0) return RunResult::Optimal;

      const auto& col = tableau[entering];
      int leave_row = -1;
      double theta = kInfinity;
      double leave_pivot = 0.0;
      for (int r = 0; r < m; ++r) {
        const double alpha = col[r] * direction;
        if (std::abs(alpha) <= kPivotTol) continue;
        const int b = basis[r];
        double ratio;
        if (alpha > 0) {
          if (!std::isfinite(lower[b])) continue;
          ratio = (value[b] - lower[b]) / alpha;
        } else {
          if (!std::isfinite(upper[b])) continue;
          ratio = (upper[b] - value[b]) / -alpha;
        }
        if (ratio < 0) ratio = 0;
        const double tie = 1e-12 * (1.0 + std::abs(theta));
        bool take = false;
        if (leave_row < 0 || ratio < theta - tie) take = true;
        else if (ratio <= theta + tie) {
          take = bland ? basis[r] < basis[leave_row] : std::abs(alpha) > std::abs(leave_pivot);
        }
        if (take) {
          leave_row = r;
          theta = ratio;
          leave_pivot = alpha;
        }
      }
      const double span = upper[entering] - lower[entering];
      const bool flip = std::isfinite(span) && span <= theta;
      if (leave_row < 0 && !flip) return RunResult::Unbounded;
      if (flip) theta = span;

      ++iterations;
      ++total;
      degenerate_run = theta <= 1e-12 ? degenerate_run + 1 : 0;

      for (int r = 0; r < m; ++r) {
        if (col[r] != 0.0) value[basis[r]] -= col[r] * direction * theta;
      }
      value[entering] += direction * theta;

      if (flip) {
        if (direction > 0) {
          state[entering] = At::Upper;
          value[entering] = upper[entering];
        } else {
          state[entering] = At::Lower;
          value[entering] = lower[entering];
        }
        continue;
      }

      const int leaving = basis[leave_row];
      if (leave_pivot > 0) {
        state[leaving] = At::Lower;
        value[leaving] = lower[leaving];
      } else {
        state[leaving] = At::Upper;
        value[leaving] = upper[leaving];
      }
      pivot(leave_row, entering);
      basis[leave_row] = entering;
      state[entering] = At::Basic;
    }
  }

  // Rebuilds B^{-1} from the original columns of the current basis and
  // recomputes the basic values. Returns false when the basis is singular.
  bool refactor() {
    const int n = ncols();
    std::vector<double> b = rhs;
    for (int c = 0; c < n; ++c) {
      if (state[c] == At::Basic || value[c] == 0.0) continue;
      for (int i = 0; i < m; ++i) b[i] -= original[c][i] * value[c];
    }
    tableau = original;
    std::vector<int> basic_cols(basis);
    std::vector<int> row_of(m, -1);
    std::vector<bool> used(m, false);
    for (int bc : basic_cols) {
      int best_row = -1;
      double best_abs = 1e-11;
      for (int i = 0; i < m; ++i) {
        if (used[i]) continue;
        if (std::abs(tableau[bc][i]) > best_abs) {
          best_abs = std::abs(tableau[bc][i]);
          best_row = i;
        }
      }
      if (best_row < 0) return false;
      used[best_row] = true;
      const std::vector<double> p = tableau[bc];
      const double piv = p[best_row];
      for (int c = 0; c < n; ++c) {
        auto& col = tableau[c];
        const double t = col[best_row];
        if (t == 0.0) continue;
        const double scaled = t / piv;
        for (int i = 0; i < m; ++i)
          if (p[i] != 0.0) col[i] -= p[i] * scaled;
        col[best_row] = scaled;
      }
      {
        const double t = b[best_row];
        const double scaled = t / piv;
        for (int i = 0; i < m; ++i)
          if (p[i] != 0.0) b[i] -= p[i] * scaled;
        b[best_row] = scaled;
      }
      row_of[best_row] = bc;
    }
    basis = row_of;
    for (int r = 0; r < m; ++r) value[basis[r]] = b[r];
    compute_reduced();
    return true;
  }

  double basic_infeasibility() const {
    double worst = 0.0;
    for (int r = 0; r < m; ++r) {
      const int b = basis[r];
      worst = std::max(worst, lower[b] - value[b]);
      worst = std::max(worst, value[b] - upper[b]);
    }
    return worst;
  }

  double row_residual() const {
    double worst = 0.0;
    std::vector<double> lhs(m, 0.0);
    for (int c = 0; c < ncols(); ++c) {
      if (value[c] == 0.0) continue;
      for (int i = 0; i < m; ++i) lhs[i] += original[c][i] * value[c];
    }
    for (int i = 0; i < m; ++i) worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
    return worst;
  }

  double rhs_scale() const {
    double s = 1.0;
    for (double v : rhs) s = std::max(s, std::abs(v));
    return s;
  }

  // Drives zero-valued artificials out of the basis where a replacement
  // column exists; rows without one are redundant and keep the artificial
  // basic at zero.
  void purge_artificials() {
    for (int r = 0; r < m; ++r) {
      const int b = basis[r];
      if (b < m || b >= 2 * m) continue;
      int pick = -1;
      double best = 1e-7;
      for (int c = 0; c < ncols(); ++c) {
        if (c >= m && c < 2 * m) continue;
        if (state[c] == At::Basic || lower[c] == upper[c]) continue;
        if (std::abs(tableau[c][r]) > best) {
          best = std::abs(tableau[c][r]);
          pick = c;
        }
      }
      if (pick < 0) continue;
      state[b] = At::Lower;
      value[b] = 0.0;
      pivot(r, pick);
      basis[r] = pick;
      state[pick] = At::Basic;
    }
  }

  SolveResult finish(Status status) {
    SolveResult res;
    res.status = status;
    res.iterations = iterations;
    const int nv = program.num_variables();
    res.primal.resize(nv);
    for (int j = 0; j < nv; ++j) res.primal[j] = value[structural(j)];
    double obj = program.objective_constant();
    for (const auto& t : program.objective()) obj += t.coef * res.primal[t.var];
    res.objective = obj;
    res.bound = obj;
    const double sign = program.sense() == Sense::Minimize ? 1.0 : -1.0;
    res.duals.resize(m);
    for (int i = 0; i < m; ++i) res.duals[i] = -sign * reduced[i];
    res.reduced_costs.resize(nv);
    for (int j = 0; j < nv; ++j) res.reduced_costs[j] = sign * reduced[structural(j)];
    return res;
  }

  SolveResult run_phase_two() {
    cost = phase_two_costs();
    compute_reduced();
    for (int attempt = 0; attempt < 3; ++attempt) {
      const RunResult r = iterate();
      if (r == RunResult::Unbounded) return finish(Status::Unbounded);
      if (r == RunResult::IterationLimit) return finish(Status::IterationLimit);
      if (r == RunResult::TimeLimit) return finish(Status::TimeLimit);
      const double tol = 1e-7 * rhs_scale();
      if (basic_infeasibility() <= tol && row_residual() <= tol) return finish(Status::Optimal);
      if (!refactor()) return finish(Status::NumericalFailure);
      if (basic_infeasibility() > 1e-6 * rhs_scale()) {
        // Drift pushed the basis out of the feasible region; start over.
        return solve_cold();
      }
    }
    return finish(Status::NumericalFailure);
  }

  int cold_restarts = 0;

  SolveResult solve_cold() {
    if (++cold_restarts > 2) return finish(Status::NumericalFailure);
    cold_start();
    iterations = 0;
    bool any_artificial = false;
    for (int r = 0; r < m; ++r) any_artificial |= basis[r] >= m && basis[r] < 2 * m;
    if (any_artificial) {
      cost.assign(ncols(), 0.0);
      for (int i = 0; i < m; ++i) cost[m + i] = 1.0;
      compute_reduced();
      const RunResult r = iterate();
      if (r == RunResult::IterationLimit) return finish(Status::IterationLimit);
      if (r == RunResult::TimeLimit) return finish(Status::TimeLimit);
      double infeas = 0.0;
      for (int i = 0; i < m; ++i) infeas += value[m + i];
      if (infeas > 1e-7 * rhs_scale()) return finish(Status::Infeasible);
      for (int i = 0; i < m; ++i) {
        upper[m + i] = 0.0;
        if (state[m + i] != At::Basic) value[m + i] = 0.0;
      }
      purge_artificials();
    }
    return run_phase_two();
  }

  // Bounded dual simplex from the current basis, used after bound changes
  // leave the basis primal infeasible. Nonbasic columns are first moved to the
  // bound their reduced cost calls for; returns nullopt when that is not
  // possible or the run stalls, so the caller can fall back to a cold start.
  std::optional<SolveResult> run_dual() {
    cost = phase_two_costs();
    compute_reduced();
    const int n = ncols();
    const double opt_tol = options.optimality_tol;
    for (int c = 0; c < n; ++c) {
      if (state[c] == At::Basic || lower[c] == upper[c]) continue;
      const double d = reduced[c];
      At want = state[c];
      if (d > opt_tol) want = At::Lower;
      else if (d < -opt_tol) want = At::Upper;
      if (want == At::Lower && !std::isfinite(lower[c])) return std::nullopt;
      if (want == At::Upper && !std::isfinite(upper[c])) return std::nullopt;
      if (want == state[c]) continue;
      const double target = want == At::Lower ? lower[c] : upper[c];
      const double delta = target - value[c];
      state[c] = want;
      value[c] = target;
      if (delta != 0.0)
        for (int r = 0; r < m; ++r) value[basis[r]] -= tableau[c][r] * delta;
    }
    const double feas_tol = 1e-9 * rhs_scale();
    const long cap = iteration_cap();
    while (true) {
      if (iterations >= cap) return std::nullopt;
      if ((iterations & 63) == 0 && deadline_passed()) return finish(Status::TimeLimit);
      int row = -1;
      double worst = feas_tol;
      for (int r = 0; r < m; ++r) {
        const int b = basis[r];
        const double v = std::max(lower[b] - value[b], value[b] - upper[b]);
        if (v > worst) {
          worst = v;
          row = r;
        }
      }
      if (row < 0) break;
      const int leaving = basis[row];
      const bool below = value[leaving] < lower[leaving];
      const double target = below ? lower[leaving] : upper[leaving];
      // x_B(row) moves by -alpha * dir * t; it must move toward target.
      // Harris two-pass ratio test: bound the step with relaxed reduced
      // costs, then take the largest pivot inside that bound.
      auto direction_of = [&](int c, double alpha) {
        const bool can_up = state[c] == At::Lower || state[c] == At::Zero;
        const bool can_down = state[c] == At::Upper || state[c] == At::Zero;
        if (below) {
          if (alpha < 0 && can_up) return 1.0;
          if (alpha > 0 && can_down) return -1.0;
        } else {
          if (alpha > 0 && can_up) return 1.0;
          if (alpha < 0 && can_down) return -1.0;
        }
        return 0.0;
      };
      double bound = kInfinity;
      for (int c = 0; c < n; ++c) {
        if (state[c] == At::Basic || lower[c] == upper[c]) continue;
        const double alpha = tableau[c][row];
        if (std::abs(alpha) <= kDualPivotTol || direction_of(c, alpha) == 0.0) continue;
        bound = std::min(bound, (std::abs(reduced[c]) + opt_tol) / std::abs(alpha));
      }
      int entering = -1;
      double best_alpha = 0.0, entering_dir = 0.0;
      for (int c = 0; c < n; ++c) {
        if (state[c] == At::Basic || lower[c] == upper[c]) continue;
        const double alpha = tableau[c][row];
        if (std::abs(alpha) <= kDualPivotTol) continue;
        const double dir = direction_of(c, alpha);
        if (dir == 0.0) continue;
        if (std::abs(reduced[c]) / std::abs(alpha) > bound) continue;
        if (std::abs(alpha) > std::abs(best_alpha)) {
          best_alpha = alpha;
          entering = c;
          entering_dir = dir;
        }
      }
      if (entering < 0) return finish(Status::Infeasible);
      ++iterations;
      ++total;
      const double t = std::abs(target - value[leaving]) / std::abs(best_alpha);
      const auto& col = tableau[entering];
      for (int r = 0; r < m; ++r)
        if (col[r] != 0.0) value[basis[r]] -= col[r] * entering_dir * t;
      value[entering] += entering_dir * t;
      value[leaving] = target;
      state[leaving] = below ? At::Lower : At::Upper;
      pivot(row, entering);
      basis[row] = entering;
      state[entering] = At::Basic;
    }
    return run_phase_two();
  }

  SolveResult solve() {
    cold_restarts = 0;
    if (!warm) return solve_cold();
    iterations = 0;
    if (basic_infeasibility() > 1e-7 * rhs_scale()) {
      if (auto r = run_dual()) return *r;
      return solve_cold();
    }
    return run_phase_two();
  }
};

SimplexSolver::SimplexSolver(const LinearProgram& program, const SolverOptions& options)
    : impl_(std::make_unique<Impl>(program, options)) {}
SimplexSolver::~SimplexSolver() = default;
SimplexSolver::SimplexSolver(SimplexSolver&&) noexcept = default;
SimplexSolver& SimplexSolver::operator=(SimplexSolver&&) noexcept = default;

SolveResult SimplexSolver::solve() { return impl_->solve(); }

const LinearProgram& SimplexSolver::program() const { return impl_->program; }
long SimplexSolver::total_iterations() const { return impl_->total; }

int SimplexSolver::add_column(std::string name, double objective_coef,
                              const std::vector<Term>& entries, double lower, double upper) {
  auto& s = *impl_;
  const int var = s.program.add_variable(std::move(name), lower, upper);
  std::vector<Term> obj = s.program.objective();
  if (objective_coef != 0.0) obj.push_back(Term{var, objective_coef});
  s.program.set_objective(s.program.sense(), obj, s.program.objective_constant());

  std::vector<double> col(s.m, 0.0);
  for (const auto& e : entries) {
    if (e.var < 0 || e.var >= s.m) throw std::invalid_argument("column row out of range");
    col[e.var] += e.coef;
  }
  s.original.push_back(col);
  s.lower.push_back(lower);
  s.upper.push_back(upper);
  if (!s.warm) return var;

  // B^{-1} a = sum_i a_i * (B^{-1} e_i), and the slack of row i is e_i.
  std::vector<double> tcol(s.m, 0.0);
  for (int i = 0; i < s.m; ++i) {
    if (col[i] == 0.0) continue;
    const auto& slack = s.tableau[i];
    for (int r = 0; r < s.m; ++r) tcol[r] += col[i] * slack[r];
  }
  s.tableau.push_back(tcol);
  At where;
  const double v = Impl::resting_value(lower, upper, where);
  s.state.push_back(where);
  s.value.push_back(v);
  s.cost.push_back(0.0);
  s.reduced.push_back(0.0);
  if (v != 0.0) {
    for (int r = 0; r < s.m; ++r) s.value[s.basis[r]] -= tcol[r] * v;
  }
  return var;
}

void SimplexSolver::set_objective(Sense sense, const std::vector<Term>& terms, double constant) {
  impl_->program.set_objective(sense, terms, constant);
}

void SimplexSolver::set_bounds(int var, double lower, double upper) {
  auto& s = *impl_;
  s.program.set_bounds(var, lower, upper);
  const int c = s.structural(var);
  s.lower[c] = lower;
  s.upper[c] = upper;
  if (!s.warm || s.state[c] == At::Basic) return;
  At where;
  double target;
  if (s.state[c] == At::Upper && std::isfinite(upper)) {
    where = At::Upper;
    target = upper;
  } else {
    target = Impl::resting_value(lower, upper, where);
  }
  const double delta = target - s.value[c];
  s.state[c] = where;
  s.value[c] = target;
  if (delta != 0.0) {
    for (int r = 0; r < s.m; ++r) s.value[s.basis[r]] -= s.tableau[c][r] * delta;
  }
}

SolveResult solve_lp(const LinearProgram& program, const SolverOptions& options) {
  if (program.has_integers()) throw std::invalid_argument("solve_lp called on a program with integer variables");
  SimplexSolver solver(program, options);
  return solver.solve();
}

}  // namespace maximin::lp
