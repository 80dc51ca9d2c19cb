#include <cctype>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "maximin/lp.hpp"

namespace maximin::lp {

const char* to_string(Status status) {
  switch (status) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::IterationLimit: return "iteration-limit";
    case Status::TimeLimit: return "time-limit";
    case Status::NumericalFailure: return "numerical-failure";
  }
  return "unknown";
}

int LinearProgram::add_variable(std::string name, double lower, double upper, bool integer) {
  variables_.push_back(Variable{std::move(name), lower, upper, integer});
  return static_cast<int>(variables_.size()) - 1;
}

int LinearProgram::add_constraint(std::string name, std::vector<Term> terms, Relation relation,
                                  double rhs) {
  constraints_.push_back(Constraint{std::move(name), std::move(terms), relation, rhs});
  return static_cast<int>(constraints_.size()) - 1;
}

void LinearProgram::set_objective(Sense sense, std::vector<Term> terms, double constant) {
  sense_ = sense;
  objective_ = std::move(terms);
  objective_constant_ = constant;
}

void LinearProgram::set_bounds(int var, double lower, double upper) {
  auto& v = variables_.at(var);
  v.lower = lower;
  v.upper = upper;
}

void LinearProgram::set_priority(int var, int priority) { variables_.at(var).priority = priority; }

bool LinearProgram::has_integers() const {
  for (const auto& v : variables_)
    if (v.integer) return true;
  return false;
}

void LinearProgram::validate() const {
  const int n = num_variables();
  for (const auto& v : variables_) {
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper ||
        v.lower == kInfinity || v.upper == -kInfinity)
      throw std::invalid_argument("inconsistent bounds on variable " + v.name);
  }
  auto check_terms = [n](const std::vector<Term>& terms, const std::string& where) {
    for (const auto& t : terms) {
      if (t.var < 0 || t.var >= n)
        throw std::invalid_argument("unknown variable referenced in " + where);
      if (!std::isfinite(t.coef)) throw std::invalid_argument("non-finite coefficient in " + where);
    }
  };
  check_terms(objective_, "objective");
  if (!std::isfinite(objective_constant_))
    throw std::invalid_argument("non-finite objective constant");
  for (const auto& c : constraints_) {
    check_terms(c.terms, "constraint " + c.name);
    if (!std::isfinite(c.rhs)) throw std::invalid_argument("non-finite rhs in " + c.name);
  }
}

double max_violation(const LinearProgram& program, const std::vector<double>& primal) {
  double worst = 0.0;
  for (int j = 0; j < program.num_variables(); ++j) {
    const auto& v = program.variable(j);
    worst = std::max(worst, v.lower - primal[j]);
    worst = std::max(worst, primal[j] - v.upper);
  }
  for (const auto& c : program.constraints()) {
    double lhs = 0.0;
    for (const auto& t : c.terms) lhs += t.coef * primal[t.var];
    switch (c.relation) {
      case Relation::LessEqual: worst = std::max(worst, lhs - c.rhs); break;
      case Relation::GreaterEqual: worst = std::max(worst, c.rhs - lhs); break;
      case Relation::Equal: worst = std::max(worst, std::abs(lhs - c.rhs)); break;
    }
  }
  return worst;
}

double dual_objective(const LinearProgram& program, const SolveResult& result) {
  double value = program.objective_constant();
  for (int i = 0; i < program.num_constraints(); ++i) value += program.constraint(i).rhs * result.duals[i];
  for (int j = 0; j < program.num_variables(); ++j) {
    const double d = result.reduced_costs[j];
    if (d == 0.0) continue;
    const auto& v = program.variable(j);
    // A nonzero reduced cost means the column sits at one of its bounds.
    const double at = std::abs(result.primal[j] - v.lower) <= std::abs(result.primal[j] - v.upper)
                          ? v.lower
                          : v.upper;
    if (std::isfinite(at)) value += d * at;
  }
  return value;
}

namespace {

std::string lp_name(const std::string& name, char prefix, int index) {
  std::string out;
  for (char ch : name) {
    if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.') out.push_back(ch);
    else out.push_back('_');
  }
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out.front())))
    out = std::string(1, prefix) + std::to_string(index) + (out.empty() ? "" : "_" + out);
  return out;
}

void write_terms(std::ostringstream& os, const std::vector<Term>& terms,
                 const std::vector<std::string>& names) {
  bool first = true;
  for (const auto& t : terms) {
    if (t.coef == 0.0) continue;
    os << (t.coef < 0 ? " - " : (first ? " " : " + ")) << std::abs(t.coef) << ' ' << names[t.var];
    first = false;
  }
  if (first) os << " 0";
}

}  // namespace

std::string to_lp_format(const LinearProgram& program) {
  std::ostringstream os;
  os << std::setprecision(17);
  std::vector<std::string> names;
  for (int j = 0; j < program.num_variables(); ++j)
    names.push_back(lp_name(program.variable(j).name, 'x', j));

  os << (program.sense() == Sense::Minimize ? "Minimize\n" : "Maximize\n") << " obj:";
  write_terms(os, program.objective(), names);
  if (program.objective_constant() != 0.0) os << " + " << program.objective_constant() << " constant";
  os << "\nSubject To\n";
  for (int i = 0; i < program.num_constraints(); ++i) {
    const auto& c = program.constraint(i);
    os << ' ' << lp_name(c.name, 'c', i) << ':';
    write_terms(os, c.terms, names);
    os << (c.relation == Relation::LessEqual ? " <= " : c.relation == Relation::Equal ? " = " : " >= ")
       << c.rhs << '\n';
  }
  os << "Bounds\n";
  if (program.objective_constant() != 0.0) os << " constant = 1\n";
  for (int j = 0; j < program.num_variables(); ++j) {
    const auto& v = program.variable(j);
    if (v.lower == -kInfinity && v.upper == kInfinity) {
      os << ' ' << names[j] << " free\n";
      continue;
    }
    os << ' ';
    if (v.lower == -kInfinity) os << "-inf";
    else os << v.lower;
    os << " <= " << names[j] << " <= ";
    if (v.upper == kInfinity) os << "+inf";
    else os << v.upper;
    os << '\n';
  }
  bool any_int = false;
  for (int j = 0; j < program.num_variables(); ++j) {
    if (!program.variable(j).integer) continue;
    if (!any_int) os << "General\n";
    any_int = true;
    os << ' ' << names[j] << '\n';
  }
  os << "End\n";
  return os.str();
}

}  // namespace maximin::lp
