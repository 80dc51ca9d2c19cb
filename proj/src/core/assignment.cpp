#include <algorithm>
#include <limits>

#include "maximin/core.hpp"

namespace maximin {

ProbabilisticAssignment ProbabilisticAssignment::from_matching(const Matching& matching, int num_objects) {
  ProbabilisticAssignment x(matching.num_agents(), num_objects);
  for (int i = 0; i < matching.num_agents(); ++i) {
    const int j = matching.object_of(i);
    if (j == kOutside) continue;
    if (j < 0 || j >= num_objects) throw std::invalid_argument("matching refers to an unknown object");
    x.at(i, j) = 1;
  }
  return x;
}

Rational ProbabilisticAssignment::row_sum(int agent) const {
  Rational s = 0;
  for (int j = 0; j < objects_; ++j) s += at(agent, j);
  return s;
}

Rational ProbabilisticAssignment::column_sum(int object) const {
  Rational s = 0;
  for (int i = 0; i < agents_; ++i) s += at(i, object);
  return s;
}

bool ProbabilisticAssignment::is_integral() const {
  return std::all_of(probs_.begin(), probs_.end(), [](const Rational& r) { return is_integer(r); });
}

Rational mu(const ProbabilisticAssignment& x) {
  Rational s = 0;
  for (int i = 0; i < x.num_agents(); ++i)
    for (int j = 0; j < x.num_objects(); ++j) s += x.at(i, j);
  return s;
}

bool is_feasible(const Instance& instance, const Matching& matching) {
  if (matching.num_agents() != instance.num_agents())
    throw std::invalid_argument("matching has " + std::to_string(matching.num_agents()) + " agents, instance has " +
                                std::to_string(instance.num_agents()));
  std::vector<int> load(instance.num_objects(), 0);
  for (int i = 0; i < matching.num_agents(); ++i) {
    const int j = matching.object_of(i);
    if (j == kOutside) continue;
    if (j < 0 || j >= instance.num_objects()) return false;
    if (!instance.acceptable(i, j)) return false;
    if (++load[j] > instance.capacity(j)) return false;
  }
  return true;
}

std::vector<std::string> feasibility_violations(const Instance& instance, const ProbabilisticAssignment& x) {
  if (x.num_agents() != instance.num_agents() || x.num_objects() != instance.num_objects())
    throw std::invalid_argument("assignment is " + std::to_string(x.num_agents()) + "x" +
                                std::to_string(x.num_objects()) + ", instance is " +
                                std::to_string(instance.num_agents()) + "x" + std::to_string(instance.num_objects()));
  std::vector<std::string> out;
  for (int i = 0; i < x.num_agents(); ++i) {
    for (int j = 0; j < x.num_objects(); ++j) {
      const Rational& v = x.at(i, j);
      if (v < 0 || v > 1)
        out.push_back("x[" + instance.agent_id(i) + "][" + instance.object_id(j) + "] = " + to_string(v) +
                      " outside [0,1]");
      if (v != 0 && !instance.acceptable(i, j))
        out.push_back("agent '" + instance.agent_id(i) + "' has positive probability for unacceptable object '" +
                      instance.object_id(j) + "'");
    }
    if (x.row_sum(i) > 1) out.push_back("row sum of agent '" + instance.agent_id(i) + "' exceeds 1");
  }
  for (int j = 0; j < x.num_objects(); ++j)
    if (x.column_sum(j) > instance.capacity(j))
      out.push_back("column sum of object '" + instance.object_id(j) + "' exceeds its capacity");
  return out;
}

bool is_feasible(const Instance& instance, const ProbabilisticAssignment& x) {
  return feasibility_violations(instance, x).empty();
}

ProbabilisticAssignment recompose(const Decomposition& d) {
  if (d.terms.empty()) throw std::invalid_argument("empty decomposition");
  ProbabilisticAssignment x(d.num_agents, d.num_objects);
  Rational total = 0;
  for (const auto& t : d.terms) {
    if (t.weight < 0) throw std::invalid_argument("negative decomposition weight");
    if (t.matching.num_agents() != d.num_agents) throw std::invalid_argument("matching dimension mismatch");
    total += t.weight;
    for (int i = 0; i < d.num_agents; ++i) {
      const int j = t.matching.object_of(i);
      if (j == kOutside) continue;
      if (j < 0 || j >= d.num_objects) throw std::invalid_argument("matching refers to an unknown object");
      x.at(i, j) += t.weight;
    }
  }
  if (total != 1) throw std::invalid_argument("decomposition weights sum to " + to_string(total) + ", not 1");
  return x;
}

int worst_case_cardinality(const Decomposition& d) {
  if (d.terms.empty()) throw std::invalid_argument("empty decomposition");
  int worst = std::numeric_limits<int>::max();
  for (const auto& t : d.terms)
    if (t.weight > 0) worst = std::min(worst, t.matching.cardinality());
  return worst == std::numeric_limits<int>::max() ? 0 : worst;
}

ConstraintStructure ConstraintStructure::for_shape(int num_agents, const std::vector<int>& capacities) {
  ConstraintStructure h;
  const int m = static_cast<int>(capacities.size());
  for (int i = 0; i < num_agents; ++i)
    for (int j = 0; j < m; ++j) h.sets.push_back({ConstraintSet::Kind::Cell, i, j, 1});
  for (int i = 0; i < num_agents; ++i) h.sets.push_back({ConstraintSet::Kind::Row, i, -1, 1});
  for (int j = 0; j < m; ++j) h.sets.push_back({ConstraintSet::Kind::Column, -1, j, capacities[j]});
  return h;
}

Rational set_sum(const ConstraintSet& set, const ProbabilisticAssignment& x) {
  switch (set.kind) {
    case ConstraintSet::Kind::Cell:
      return x.at(set.agent, set.object);
    case ConstraintSet::Kind::Row:
      return x.row_sum(set.agent);
    case ConstraintSet::Kind::Column:
      return x.column_sum(set.object);
  }
  return 0;
}

int count_integral_sets(const ConstraintStructure& structure, const ProbabilisticAssignment& x) {
  int tau = 0;
  for (const auto& s : structure.sets) tau += is_integer(set_sum(s, x));
  return tau;
}

}  // namespace maximin
