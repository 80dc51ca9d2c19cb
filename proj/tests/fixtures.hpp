#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "maximin/core.hpp"

namespace fixtures {

using maximin::Instance;
using maximin::Matching;
using maximin::ProbabilisticAssignment;
using maximin::Rational;

inline Instance make_instance(const std::vector<int>& capacities, const std::vector<std::vector<int>>& prefs) {
  maximin::RawInstance raw;
  for (std::size_t j = 0; j < capacities.size(); ++j) raw.objects.push_back({"o" + std::to_string(j), capacities[j]});
  for (std::size_t i = 0; i < prefs.size(); ++i) {
    maximin::AgentSpec a{"a" + std::to_string(i), {}};
    for (int j : prefs[i]) a.prefs.push_back("o" + std::to_string(j));
    raw.agents.push_back(a);
  }
  return maximin::validate_instance(raw);
}

// Objects a, b, c = 0, 1, 2; q = (2,1,1); agents 1,2: a>b>c; agents 3,4: a.
inline Instance example_one() { return make_instance({2, 1, 1}, {{0, 1, 2}, {0, 1, 2}, {0}, {0}}); }

// q = (2,2); agents 1,2: a>b; agents 3,4: a.
inline Instance example_three() { return make_instance({2, 2}, {{0, 1}, {0, 1}, {0}, {0}}); }

inline ProbabilisticAssignment matrix(const std::vector<std::vector<std::string>>& rows) {
  ProbabilisticAssignment x(static_cast<int>(rows.size()), static_cast<int>(rows.at(0).size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) x.at(int(i), int(j)) = maximin::parse_rational(rows[i][j]);
  return x;
}

inline ProbabilisticAssignment x_one() {
  return matrix({{"1/2", "5/12", "1/12"}, {"1/2", "5/12", "1/12"}, {"1/2", "0", "0"}, {"1/2", "0", "0"}});
}

inline ProbabilisticAssignment x_two() {
  return matrix({{"1/2", "1/2"}, {"1/2", "1/2"}, {"1/2", "0"}, {"1/2", "0"}});
}

inline Instance random_instance(std::mt19937_64& rng, int max_agents, int max_objects, int max_capacity = 2) {
  std::uniform_int_distribution<int> na(1, max_agents), no(1, max_objects), cap(1, max_capacity);
  const int n = na(rng), m = no(rng);
  std::vector<int> q(m);
  for (auto& c : q) c = cap(rng);
  std::vector<std::vector<int>> prefs(n);
  for (auto& p : prefs) {
    std::vector<int> objs(m);
    for (int j = 0; j < m; ++j) objs[j] = j;
    std::shuffle(objs.begin(), objs.end(), rng);
    const int len = std::uniform_int_distribution<int>(0, m)(rng);
    p.assign(objs.begin(), objs.begin() + len);
  }
  return make_instance(q, prefs);
}

inline std::size_t random_index(std::mt19937_64& rng, std::size_t size) {
  return std::uniform_int_distribution<std::size_t>(0, size - 1)(rng);
}

// Every feasible matching, by brute force.
inline std::vector<Matching> all_matchings(const Instance& inst) {
  std::vector<Matching> out;
  std::vector<int> cur(inst.num_agents(), maximin::kOutside);
  std::vector<int> load(inst.num_objects(), 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == inst.num_agents()) {
      out.emplace_back(cur);
      return;
    }
    cur[i] = maximin::kOutside;
    rec(i + 1);
    for (int j : inst.prefs(i)) {
      if (load[j] >= inst.capacity(j)) continue;
      ++load[j];
      cur[i] = j;
      rec(i + 1);
      --load[j];
    }
    cur[i] = maximin::kOutside;
  };
  rec(0);
  return out;
}

// Pareto domination by direct comparison with every feasible matching.
inline bool brute_force_pe(const Instance& inst, const Matching& mt, const std::vector<Matching>& all) {
  for (const auto& other : all) {
    bool weakly = true, strictly = false;
    for (int i = 0; i < inst.num_agents() && weakly; ++i) {
      const int a = inst.rank(i, other.object_of(i)), b = inst.rank(i, mt.object_of(i));
      if (a > b) weakly = false;
      if (a < b) strictly = true;
    }
    if (weakly && strictly) return false;
  }
  return true;
}

// Random feasible rational assignment supported on acceptable cells.
inline ProbabilisticAssignment random_assignment(std::mt19937_64& rng, const Instance& inst, int denominator = 12) {
  ProbabilisticAssignment x(inst.num_agents(), inst.num_objects());
  std::vector<Rational> col_left;
  for (int j = 0; j < inst.num_objects(); ++j) col_left.emplace_back(inst.capacity(j));
  for (int i = 0; i < inst.num_agents(); ++i) {
    Rational row_left = 1;
    for (int j : inst.prefs(i)) {
      Rational cap = std::min(row_left, col_left[j]);
      const long hi = maximin::floor_int(cap * denominator);
      if (hi <= 0) continue;
      Rational v(std::uniform_int_distribution<long>(0, hi)(rng), denominator);
      v.canonicalize();
      x.at(i, j) = v;
      row_left -= v;
      col_left[j] -= v;
    }
  }
  return x;
}

}  // namespace fixtures
