#include <algorithm>
#include <numeric>
#include <set>

#include "maximin/core.hpp"

namespace maximin {

Matching serial_dictatorship(const Instance& instance, std::span<const int> order) {
  const int n = instance.num_agents();
  if (static_cast<int>(order.size()) != n) throw std::invalid_argument("ordering length differs from agent count");
  std::vector<char> seen(n, 0);
  for (int a : order) {
    if (a < 0 || a >= n || seen[a]) throw std::invalid_argument("ordering is not a permutation of the agents");
    seen[a] = 1;
  }
  std::vector<int> left = instance.capacities();
  std::vector<int> assignment(n, kOutside);
  for (int a : order) {
    for (int j : instance.prefs(a)) {
      if (left[j] > 0) {
        --left[j];
        assignment[a] = j;
        break;
      }
    }
  }
  return Matching(std::move(assignment));
}

std::optional<std::vector<int>> equilibrium_prices(const Instance& instance, const Matching& matching) {
  if (!is_feasible(instance, matching)) return std::nullopt;
  const int m = instance.num_objects();
  std::vector<int> load(m, 0);
  for (int o : matching.assignment())
    if (o != kOutside) ++load[o];

  // maximality: an unassigned agent may not have a listed object with room
  for (int i = 0; i < instance.num_agents(); ++i) {
    if (matching.assigned(i)) continue;
    for (int j : instance.prefs(i))
      if (load[j] < instance.capacity(j)) return std::nullopt;
  }

  // envy graph on objects: j -> k when an agent holding j prefers k
  std::vector<std::vector<char>> edge(m, std::vector<char>(m, 0));
  std::vector<int> indegree(m, 0);
  for (int i = 0; i < instance.num_agents(); ++i) {
    const int held = matching.object_of(i);
    if (held == kOutside) continue;
    for (int k : instance.prefs(i)) {
      if (k == held) break;
      if (load[k] < instance.capacity(k)) return std::nullopt;
      if (!edge[held][k]) {
        edge[held][k] = 1;
        ++indegree[k];
      }
    }
  }

  std::vector<int> price(m, 0);
  std::vector<int> queue;
  for (int j = 0; j < m; ++j)
    if (indegree[j] == 0) queue.push_back(j);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int j = queue[head];
    for (int k = 0; k < m; ++k) {
      if (!edge[j][k]) continue;
      price[k] = std::max(price[k], price[j] + 1);
      if (--indegree[k] == 0) queue.push_back(k);
    }
  }
  if (static_cast<int>(queue.size()) != m) return std::nullopt;  // cycle
  return price;
}

bool is_pareto_efficient(const Instance& instance, const Matching& matching) {
  return equilibrium_prices(instance, matching).has_value();
}

std::vector<Matching> enumerate_pe_matchings(const Instance& instance, int agent_limit) {
  const int n = instance.num_agents();
  if (n > agent_limit)
    throw std::length_error("enumeration limited to " + std::to_string(agent_limit) + " agents, instance has " +
                            std::to_string(n));
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::set<Matching> found;
  do {
    found.insert(serial_dictatorship(instance, order));
  } while (std::next_permutation(order.begin(), order.end()));
  return {found.begin(), found.end()};
}

}  // namespace maximin
