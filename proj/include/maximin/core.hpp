#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "maximin/rational.hpp"

namespace maximin {

// Object index standing for the outside option (being unassigned).
inline constexpr int kOutside = -1;

struct ObjectSpec {
  std::string id;
  long long capacity = 1;
};

struct AgentSpec {
  std::string id;
  std::vector<std::string> prefs;  // most-preferred first, truncated at the outside option
};

struct RawInstance {
  std::vector<ObjectSpec> objects;
  std::vector<AgentSpec> agents;
};

class InstanceError : public std::invalid_argument {
 public:
  explicit InstanceError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

// A validated one-sided matching market: agents, capacitated objects and
// strict preference lists over the acceptable objects. Immutable.
class Instance {
 public:
  int num_agents() const { return static_cast<int>(agent_ids_.size()); }
  int num_objects() const { return static_cast<int>(object_ids_.size()); }
  const std::string& agent_id(int agent) const { return agent_ids_.at(agent); }
  const std::string& object_id(int object) const { return object_ids_.at(object); }
  int capacity(int object) const { return capacities_.at(object); }
  const std::vector<int>& capacities() const { return capacities_; }
  const std::vector<int>& prefs(int agent) const { return prefs_.at(agent); }

  // Position of `object` in the agent's list, or -1 when unacceptable.
  // The outside option ranks right after the last listed object.
  int rank(int agent, int object) const;
  bool acceptable(int agent, int object) const { return object != kOutside && rank(agent, object) >= 0; }
  // Strict preference between two objects (either may be kOutside).
  // Unacceptable objects rank below the outside option and tie with each other.
  bool prefers(int agent, int a, int b) const;

  std::optional<int> find_agent(std::string_view id) const;
  std::optional<int> find_object(std::string_view id) const;

  RawInstance raw() const;

  friend Instance validate_instance(const RawInstance& raw);

 private:
  std::vector<std::string> agent_ids_;
  std::vector<std::string> object_ids_;
  std::vector<int> capacities_;
  std::vector<std::vector<int>> prefs_;
  std::vector<int> rank_;  // agents x objects, -1 = unacceptable
};

// Throws InstanceError listing every violation found.
Instance validate_instance(const RawInstance& raw);

// Agent -> object (or kOutside). Ordered and hashable through key() so it can
// be deduplicated.
class Matching {
 public:
  Matching() = default;
  explicit Matching(std::vector<int> assignment) : assignment_(std::move(assignment)) {}
  static Matching unassigned(int num_agents) { return Matching(std::vector<int>(num_agents, kOutside)); }

  int num_agents() const { return static_cast<int>(assignment_.size()); }
  int object_of(int agent) const { return assignment_.at(agent); }
  bool assigned(int agent) const { return assignment_.at(agent) != kOutside; }
  int cardinality() const;
  const std::vector<int>& assignment() const { return assignment_; }
  std::string key() const;

  auto operator<=>(const Matching&) const = default;
  bool operator==(const Matching&) const = default;

 private:
  std::vector<int> assignment_;
};

// Dense agents x objects matrix of exact probabilities.
class ProbabilisticAssignment {
 public:
  ProbabilisticAssignment() = default;
  ProbabilisticAssignment(int num_agents, int num_objects)
      : agents_(num_agents), objects_(num_objects), probs_(std::size_t(num_agents) * num_objects) {}
  static ProbabilisticAssignment from_matching(const Matching& matching, int num_objects);

  int num_agents() const { return agents_; }
  int num_objects() const { return objects_; }
  const Rational& at(int agent, int object) const { return probs_.at(index(agent, object)); }
  Rational& at(int agent, int object) { return probs_.at(index(agent, object)); }

  Rational row_sum(int agent) const;
  Rational column_sum(int object) const;
  bool is_integral() const;

  bool operator==(const ProbabilisticAssignment& other) const = default;

 private:
  std::size_t index(int agent, int object) const {
    if (agent < 0 || agent >= agents_ || object < 0 || object >= objects_)
      throw std::out_of_range("assignment index out of range");
    return std::size_t(agent) * objects_ + object;
  }
  int agents_ = 0;
  int objects_ = 0;
  std::vector<Rational> probs_;
};

// Expected number of assigned agents.
Rational mu(const ProbabilisticAssignment& x);

// Dimension mismatches throw std::invalid_argument.
bool is_feasible(const Instance& instance, const Matching& matching);
bool is_feasible(const Instance& instance, const ProbabilisticAssignment& x);
std::vector<std::string> feasibility_violations(const Instance& instance, const ProbabilisticAssignment& x);

struct DecompositionTerm {
  Rational weight;
  Matching matching;
};

// A lottery over matchings; weights are positive and sum to one.
struct Decomposition {
  int num_agents = 0;
  int num_objects = 0;
  std::vector<DecompositionTerm> terms;
};

// Throws std::invalid_argument when empty or when the weights do not sum to 1.
ProbabilisticAssignment recompose(const Decomposition& decomposition);
int worst_case_cardinality(const Decomposition& decomposition);

// The rows/columns/cells quota system describing feasibility.
struct ConstraintSet {
  enum class Kind { Cell, Row, Column };
  Kind kind;
  int agent = -1;
  int object = -1;
  long long quota = 1;
};

struct ConstraintStructure {
  std::vector<ConstraintSet> sets;
  static ConstraintStructure for_shape(int num_agents, const std::vector<int>& capacities);
};

Rational set_sum(const ConstraintSet& set, const ProbabilisticAssignment& x);
// Number of constraint sets whose sum is an integer.
int count_integral_sets(const ConstraintStructure& structure, const ProbabilisticAssignment& x);

// Agents pick in `order` their best object with capacity left.
// Throws std::invalid_argument if `order` is not a permutation of the agents.
Matching serial_dictatorship(const Instance& instance, std::span<const int> order);

// Integer object prices making (M, p) a competitive equilibrium, when they
// exist: objects with spare capacity cost 0 and every object an agent envies
// costs strictly more than the one she holds. Built from the envy graph on
// objects (longest-path ranks), so prices lie in {0, ..., |O| - 1}.
std::optional<std::vector<int>> equilibrium_prices(const Instance& instance, const Matching& matching);

// Maximal plus equilibrium prices exist, i.e. Pareto-efficient.
bool is_pareto_efficient(const Instance& instance, const Matching& matching);

inline constexpr int kDefaultEnumerationLimit = 8;

// All serial-dictatorship outcomes, i.e. every Pareto-efficient matching,
// sorted and deduplicated. Throws std::length_error above `agent_limit`.
std::vector<Matching> enumerate_pe_matchings(const Instance& instance, int agent_limit = kDefaultEnumerationLimit);

}  // namespace maximin
