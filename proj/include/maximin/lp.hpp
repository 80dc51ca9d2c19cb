#pragma once

#include <chrono>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace maximin::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense { Minimize, Maximize };
enum class Relation { LessEqual, Equal, GreaterEqual };

enum class Status {
  Optimal,
  Infeasible,
  Unbounded,
  IterationLimit,
  TimeLimit,
  NumericalFailure,
};

const char* to_string(Status status);

struct Term {
  int var;
  double coef;
};

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
  bool integer = false;
  int priority = 0;  // branch-and-bound branches on the highest class first
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
};

// An LP/MIP statement: bounded variables, linear objective, linear rows.
class LinearProgram {
 public:
  int add_variable(std::string name, double lower = 0.0, double upper = kInfinity,
                   bool integer = false);
  int add_binary(std::string name) { return add_variable(std::move(name), 0.0, 1.0, true); }
  int add_constraint(std::string name, std::vector<Term> terms, Relation relation, double rhs);

  void set_objective(Sense sense, std::vector<Term> terms, double constant = 0.0);
  void set_bounds(int var, double lower, double upper);
  void set_priority(int var, int priority);

  int num_variables() const { return static_cast<int>(variables_.size()); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const Variable& variable(int var) const { return variables_.at(var); }
  const Constraint& constraint(int row) const { return constraints_.at(row); }

  Sense sense() const { return sense_; }
  const std::vector<Term>& objective() const { return objective_; }
  double objective_constant() const { return objective_constant_; }
  bool has_integers() const;

  // Throws std::invalid_argument on non-finite coefficients, out-of-range
  // variable references or inconsistent bounds.
  void validate() const;

 private:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  Sense sense_ = Sense::Minimize;
  std::vector<Term> objective_;
  double objective_constant_ = 0.0;
};

struct SolverOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double integrality_tol = 1e-6;
  long max_iterations = 0;  // 0 picks a size-dependent default
  long max_nodes = 0;       // 0 means unlimited
  std::optional<std::chrono::steady_clock::time_point> deadline;
  // MIP only: look for solutions strictly better than this objective value;
  // Infeasible then means none exists.
  std::optional<double> cutoff;
  // MIP only: a starting incumbent, ignored unless feasible and integral.
  std::vector<double> incumbent_hint;
};

struct SolveResult {
  Status status = Status::NumericalFailure;
  double objective = 0.0;
  std::vector<double> primal;
  // Sensitivity of the optimal objective to each row's right-hand side, in
  // the sense of the original objective. For a minimization a binding >= row
  // has a nonnegative dual and a binding <= row a nonpositive one.
  std::vector<double> duals;
  std::vector<double> reduced_costs;
  long iterations = 0;
  long nodes = 0;
  bool root_integral = false;
  // Best proven bound (MIP); equals objective when optimal.
  double bound = 0.0;
  // Set when a MIP stops early with a feasible incumbent.
  bool has_incumbent = false;

  bool optimal() const { return status == Status::Optimal; }
};

// Dense bounded primal simplex that keeps its tableau between solves, so a
// column-generation master can append columns or swap objectives and
// re-optimize from the previous basis. Dantzig pricing, switching to Bland's
// rule after a run of degenerate pivots.
class SimplexSolver {
 public:
  explicit SimplexSolver(const LinearProgram& program, const SolverOptions& options = {});
  ~SimplexSolver();
  SimplexSolver(SimplexSolver&&) noexcept;
  SimplexSolver& operator=(SimplexSolver&&) noexcept;

  SolveResult solve();

  // Appends a structural column; `entries` are (row, coefficient) pairs.
  int add_column(std::string name, double objective_coef, const std::vector<Term>& entries,
                 double lower = 0.0, double upper = kInfinity);
  void set_objective(Sense sense, const std::vector<Term>& terms, double constant = 0.0);
  void set_bounds(int var, double lower, double upper);

  const LinearProgram& program() const;
  long total_iterations() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

SolveResult solve_lp(const LinearProgram& program, const SolverOptions& options = {});
SolveResult solve_mip(const LinearProgram& program, const SolverOptions& options = {});

// Dual objective b'y plus the bound contributions of nonbasic columns; equals
// the primal objective at an optimum up to round-off.
double dual_objective(const LinearProgram& program, const SolveResult& result);

// Largest absolute row or bound violation of `primal`.
double max_violation(const LinearProgram& program, const std::vector<double>& primal);

// CPLEX LP file layout, for cross-checking with external solvers.
std::string to_lp_format(const LinearProgram& program);

// Interface for swapping in an external engine behind the same statement.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual SolveResult solve(const LinearProgram& program, const SolverOptions& options) = 0;
};

class BuiltinBackend final : public Backend {
 public:
  SolveResult solve(const LinearProgram& program, const SolverOptions& options) override {
    return program.has_integers() ? solve_mip(program, options) : solve_lp(program, options);
  }
};

}  // namespace maximin::lp
