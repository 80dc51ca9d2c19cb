#pragma once

#include <optional>
#include <vector>

#include "maximin/core.hpp"

namespace maximin {

// Undirected graph of the fractional entries of an assignment. Vertices are
// agents [0, n), objects [n, n + m), then source n + m and sink n + m + 1.
struct FractionalityGraph {
  enum class EdgeKind { Source, Cell, Sink };
  struct Edge {
    EdgeKind kind;
    int agent;   // -1 for Sink edges
    int object;  // -1 for Source edges
    int u;
    int v;
  };
  int num_agents = 0;
  int num_objects = 0;
  std::vector<Edge> edges;

  int num_vertices() const { return num_agents + num_objects + 2; }
  int source() const { return num_agents + num_objects; }
  int sink() const { return num_agents + num_objects + 1; }
  std::vector<int> degrees() const;
};

FractionalityGraph fractionality_graph(const ProbabilisticAssignment& x);

// A matching with the same expected cardinality as `x` that agrees with `x`
// on every row, column and cell whose sum is already an integer. Requires
// mu(x) integral and x feasible (std::invalid_argument otherwise).
Matching budish_extract(const Instance& instance, const ProbabilisticAssignment& x);

// Largest lambda >= 0 keeping x + lambda (x - M) inside the feasible
// assignments. Throws std::invalid_argument when x equals M.
Rational lambda_max(const Instance& instance, const ProbabilisticAssignment& x, const Matching& matching);

struct MdStep {
  Matching matching;
  Rational lambda;
  int tau_before = 0;
  int tau_after = 0;
};

// Lottery over matchings that each assign floor(mu) or ceil(mu) agents and
// average to `x` exactly. `steps`, when given, receives one entry per
// extraction (on the augmented matrix when mu is fractional).
Decomposition decompose_md(const Instance& instance, const ProbabilisticAssignment& x,
                           std::vector<MdStep>* steps = nullptr);

struct RobustDecomposition {
  Decomposition decomposition;
  std::optional<Matching> offending;  // first matching that is not Pareto-efficient
  bool ok() const { return !offending.has_value(); }
};

// decompose_md followed by a Pareto-efficiency check of every matching.
RobustDecomposition decompose_robust(const Instance& instance, const ProbabilisticAssignment& x);

long long md_upper_bound(const ProbabilisticAssignment& x);

}  // namespace maximin
