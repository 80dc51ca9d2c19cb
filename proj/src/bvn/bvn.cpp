#include "maximin/bvn.hpp"

#include <map>
#include <stdexcept>

namespace maximin {

namespace {

using Kind = FractionalityGraph::EdgeKind;

Rational frac_up(const Rational& v) { return to_rational(ceil_int(v)) - v; }
Rational frac_down(const Rational& v) { return v - to_rational(floor_int(v)); }

void require_feasible(const Instance& instance, const ProbabilisticAssignment& x) {
  const auto violations = feasibility_violations(instance, x);
  if (!violations.empty()) throw std::invalid_argument("infeasible assignment: " + violations.front());
}

// Cycle-cancel the fractional entries until the matrix is integral. Sums over
// rows, columns and cells that are integral never move.
Matching extract(ProbabilisticAssignment x) {
  const int n = x.num_agents();
  const int m = x.num_objects();
  std::vector<Rational> row(n), col(m);
  for (int i = 0; i < n; ++i) row[i] = x.row_sum(i);
  for (int j = 0; j < m; ++j) col[j] = x.column_sum(j);

  auto value = [&](const FractionalityGraph::Edge& e) -> Rational& {
    switch (e.kind) {
      case Kind::Source:
        return row[e.agent];
      case Kind::Cell:
        return x.at(e.agent, e.object);
      case Kind::Sink:
        break;
    }
    return col[e.object];
  };

  const int max_rounds = n * m + n + m + 1;
  for (int round = 0;; ++round) {
    if (round > max_rounds) throw std::logic_error("cycle canceling did not terminate");
    const FractionalityGraph g = fractionality_graph(x);
    if (g.edges.empty()) break;
    std::vector<std::vector<int>> adj(g.num_vertices());
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
      adj[g.edges[e].u].push_back(e);
      adj[g.edges[e].v].push_back(e);
    }
    int start = -1;
    for (int v = 0; v < g.num_vertices(); ++v) {
      if (adj[v].size() == 1) throw std::logic_error("fractionality graph has a vertex of degree 1");
      if (start < 0 && !adj[v].empty()) start = v;
    }

    std::vector<int> pos(g.num_vertices(), -1);
    std::vector<int> path_vertices{start};
    std::vector<int> path_edges;
    pos[start] = 0;
    int cur = start, came_by = -1;
    std::vector<std::pair<int, int>> cycle;  // (edge, sign)
    while (cycle.empty()) {
      int next_edge = -1;
      for (int e : adj[cur])
        if (e != came_by) {
          next_edge = e;
          break;
        }
      const auto& ed = g.edges[next_edge];
      const int w = ed.u == cur ? ed.v : ed.u;
      path_edges.push_back(next_edge);
      if (pos[w] >= 0) {
        for (std::size_t k = pos[w]; k < path_edges.size(); ++k) {
          const auto& ce = g.edges[path_edges[k]];
          cycle.emplace_back(path_edges[k], ce.u == path_vertices[k] ? 1 : -1);
        }
        break;
      }
      pos[w] = static_cast<int>(path_vertices.size());
      path_vertices.push_back(w);
      came_by = next_edge;
      cur = w;
    }

    Rational alpha = 2;
    for (auto [e, sign] : cycle) {
      const Rational& v = value(g.edges[e]);
      alpha = std::min<Rational>(alpha, sign > 0 ? frac_up(v) : frac_down(v));
    }
    for (auto [e, sign] : cycle) {
      Rational& v = value(g.edges[e]);
      if (sign > 0)
        v += alpha;
      else
        v -= alpha;
    }
  }

  std::vector<int> assignment(n, kOutside);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      if (x.at(i, j) == 1) assignment[i] = j;
  return Matching(std::move(assignment));
}

Rational lambda_bound(const ProbabilisticAssignment& x, const Matching& matching, const std::vector<int>& caps) {
  const int n = x.num_agents();
  const int m = x.num_objects();
  std::optional<Rational> best;
  auto consider = [&](const Rational& s, const Rational& in_matching, long long quota) {
    const Rational d = s - in_matching;
    if (d == 0) return;
    Rational limit = d > 0 ? Rational((to_rational(quota) - s) / d) : Rational(s / -d);
    if (!best || limit < *best) best = limit;
  };
  std::vector<Rational> row(n), col(m);
  std::vector<int> mrow(n, 0), mcol(m, 0);
  for (int i = 0; i < n; ++i) {
    const int held = matching.object_of(i);
    for (int j = 0; j < m; ++j) {
      const Rational& v = x.at(i, j);
      row[i] += v;
      col[j] += v;
      consider(v, held == j ? 1 : 0, 1);
    }
    if (held != kOutside) {
      ++mrow[i];
      ++mcol[held];
    }
  }
  for (int i = 0; i < n; ++i) consider(row[i], mrow[i], 1);
  for (int j = 0; j < m; ++j) consider(col[j], mcol[j], caps[j]);
  if (!best) throw std::invalid_argument("assignment equals the matching; step size is unbounded");
  return *best;
}

Decomposition merge_terms(int n, int m, std::vector<DecompositionTerm> terms) {
  Decomposition d{n, m, {}};
  std::map<Matching, std::size_t> where;
  for (auto& t : terms) {
    if (t.weight == 0) continue;
    auto [it, fresh] = where.emplace(t.matching, d.terms.size());
    if (fresh)
      d.terms.push_back(std::move(t));
    else
      d.terms[it->second].weight += t.weight;
  }
  return d;
}

}  // namespace

FractionalityGraph fractionality_graph(const ProbabilisticAssignment& x) {
  FractionalityGraph g;
  g.num_agents = x.num_agents();
  g.num_objects = x.num_objects();
  const int n = g.num_agents;
  for (int i = 0; i < n; ++i)
    if (!is_integer(x.row_sum(i))) g.edges.push_back({Kind::Source, i, -1, g.source(), i});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < g.num_objects; ++j)
      if (!is_integer(x.at(i, j))) g.edges.push_back({Kind::Cell, i, j, i, n + j});
  for (int j = 0; j < g.num_objects; ++j)
    if (!is_integer(x.column_sum(j))) g.edges.push_back({Kind::Sink, -1, j, n + j, g.sink()});
  return g;
}

std::vector<int> FractionalityGraph::degrees() const {
  std::vector<int> deg(num_vertices(), 0);
  for (const auto& e : edges) {
    ++deg[e.u];
    ++deg[e.v];
  }
  return deg;
}

Matching budish_extract(const Instance& instance, const ProbabilisticAssignment& x) {
  require_feasible(instance, x);
  if (!is_integer(mu(x))) throw std::invalid_argument("expected cardinality " + to_string(mu(x)) + " is not integral");
  return extract(x);
}

Rational lambda_max(const Instance& instance, const ProbabilisticAssignment& x, const Matching& matching) {
  if (x.num_agents() != instance.num_agents() || x.num_objects() != instance.num_objects() ||
      matching.num_agents() != instance.num_agents())
    throw std::invalid_argument("dimension mismatch");
  return lambda_bound(x, matching, instance.capacities());
}

Decomposition decompose_md(const Instance& instance, const ProbabilisticAssignment& x, std::vector<MdStep>* steps) {
  require_feasible(instance, x);
  const int n = x.num_agents();
  const int m = x.num_objects();
  const Rational total = mu(x);

  // With fractional mu, one extra agent and one extra unit object absorb the
  // missing mass so every extracted matching has the same size.
  const bool augmented = !is_integer(total);
  ProbabilisticAssignment cur = x;
  std::vector<int> caps = instance.capacities();
  if (augmented) {
    ProbabilisticAssignment big(n + 1, m + 1);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) big.at(i, j) = x.at(i, j);
    big.at(n, m) = to_rational(ceil_int(total)) - total;
    cur = std::move(big);
    caps.push_back(1);
  }
  const int rows = cur.num_agents();
  const int cols = cur.num_objects();
  const auto structure = ConstraintStructure::for_shape(rows, caps);
  const int max_steps = static_cast<int>(structure.sets.size());

  std::vector<DecompositionTerm> raw;
  Rational remaining = 1;  // product of 1/(1+lambda) so far
  for (int step = 0; !cur.is_integral(); ++step) {
    if (step >= max_steps) throw std::logic_error("decomposition exceeded the constraint-set bound");
    Matching mt = extract(cur);
    const Rational lambda = lambda_bound(cur, mt, caps);
    const int tau_before = steps ? count_integral_sets(structure, cur) : 0;
    for (int i = 0; i < rows; ++i) {
      const int held = mt.object_of(i);
      for (int j = 0; j < cols; ++j) {
        Rational& v = cur.at(i, j);
        v += lambda * (v - (held == j ? 1 : 0));
      }
    }
    if (steps) steps->push_back({mt, lambda, tau_before, count_integral_sets(structure, cur)});
    raw.push_back({remaining * lambda / (1 + lambda), std::move(mt)});
    remaining /= 1 + lambda;
  }
  std::vector<int> last(rows, kOutside);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (cur.at(i, j) == 1) last[i] = j;
  raw.push_back({remaining, Matching(std::move(last))});

  if (augmented) {
    for (auto& t : raw) {
      auto a = t.matching.assignment();
      a.pop_back();
      for (int& o : a)
        if (o == m) throw std::logic_error("dummy object assigned to a real agent");
      t.matching = Matching(std::move(a));
    }
  }
  return merge_terms(n, m, std::move(raw));
}

RobustDecomposition decompose_robust(const Instance& instance, const ProbabilisticAssignment& x) {
  RobustDecomposition out;
  out.decomposition = decompose_md(instance, x);
  for (const auto& t : out.decomposition.terms) {
    if (!is_pareto_efficient(instance, t.matching)) {
      out.offending = t.matching;
      break;
    }
  }
  return out;
}

long long md_upper_bound(const ProbabilisticAssignment& x) { return floor_int(mu(x)); }

}  // namespace maximin
