#pragma once

#include <optional>
#include <vector>

#include "maximin/core.hpp"
#include "maximin/lp.hpp"

namespace maximin {

// Per-cell fixing of assignment variables.
enum class CellFix : signed char { Free = -1, Zero = 0, One = 1 };

struct PeModelOptions {
  std::optional<int> min_cardinality;
  std::vector<CellFix> fixing;  // agents x objects row-major; empty leaves all free
  bool integer_prices = true;
  // Valid inequalities that tighten the relaxation without changing the
  // integer points: m_ij <= e_jk, e_jk <= f_k, and no envy cycles of length
  // two or three.
  bool strengthen = true;
};

// Integer program whose feasible points are exactly the Pareto-efficient
// matchings of an instance, certified by competitive-equilibrium prices:
//   assignment  m_ij in {0,1} for acceptable j, rows <= 1, columns <= q_j
//   envy count  s_jk = #{i : m_ij = 1, k >_i j},  flag e_jk = [s_jk > 0]
//   fullness    f_j = [column j is full]
//   maximal     sum_l m_il + f_j >= 1 for every acceptable j
//   prices      p_j <= |O| f_j,  p_k >= p_j + 1 - (|O|+1)(1 - e_jk)
// The objective is left empty for the caller.
class PeMatchingModel {
 public:
  explicit PeMatchingModel(const Instance& instance, const PeModelOptions& options = {});

  lp::LinearProgram& program() { return program_; }
  const lp::LinearProgram& program() const { return program_; }

  // -1 when the cell has no variable (object not acceptable).
  int assignment_var(int agent, int object) const { return assign_.at(std::size_t(agent) * objects_ + object); }
  int price_var(int object) const { return price_.at(object); }
  int full_var(int object) const { return full_.at(object); }
  // -1 when no agent ranks k above j.
  int envy_var(int from, int to) const { return envy_.at(std::size_t(from) * objects_ + to); }
  std::vector<lp::Term> cardinality_terms(double coef = 1.0) const;

  Matching decode(const std::vector<double>& primal) const;
  // A full primal point for a Pareto-efficient matching (prices from the
  // envy graph); empty when the matching is not Pareto-efficient.
  std::vector<double> encode(const Instance& instance, const Matching& matching) const;

 private:
  int agents_ = 0;
  int objects_ = 0;
  lp::LinearProgram program_;
  std::vector<int> assign_;
  std::vector<int> price_;
  std::vector<int> full_;
  std::vector<int> envy_;
  std::vector<int> count_;
};

enum class Extreme { Min, Max };

// p- (Min) or p+ (Max): the fewest / most agents any Pareto-efficient
// matching assigns. Throws std::runtime_error when the solver does not prove
// optimality.
int extreme_pe_cardinality(const Instance& instance, Extreme direction, const lp::SolverOptions& options = {});

}  // namespace maximin
