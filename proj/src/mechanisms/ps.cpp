#include "maximin/mechanisms.hpp"

namespace maximin {

ProbabilisticAssignment probabilistic_serial(const Instance& instance) {
  const int n = instance.num_agents();
  const int m = instance.num_objects();
  ProbabilisticAssignment x(n, m);
  std::vector<Rational> remaining;
  for (int j = 0; j < m; ++j) remaining.emplace_back(instance.capacity(j));
  std::vector<std::size_t> cursor(n, 0);

  Rational t = 0;
  std::vector<int> eating(n);
  std::vector<int> eaters(m);
  while (t < 1) {
    std::fill(eaters.begin(), eaters.end(), 0);
    bool anyone = false;
    for (int i = 0; i < n; ++i) {
      const auto& prefs = instance.prefs(i);
      while (cursor[i] < prefs.size() && remaining[prefs[cursor[i]]] == 0) ++cursor[i];
      eating[i] = cursor[i] < prefs.size() ? prefs[cursor[i]] : kOutside;
      if (eating[i] != kOutside) {
        ++eaters[eating[i]];
        anyone = true;
      }
    }
    if (!anyone) break;
    Rational step = 1 - t;
    for (int j = 0; j < m; ++j)
      if (eaters[j] > 0) step = std::min<Rational>(step, remaining[j] / eaters[j]);
    for (int i = 0; i < n; ++i)
      if (eating[i] != kOutside) x.at(i, eating[i]) += step;
    for (int j = 0; j < m; ++j) remaining[j] -= step * eaters[j];
    t += step;
  }
  return x;
}

bool is_envy_free(const Instance& instance, const ProbabilisticAssignment& x) {
  const int n = instance.num_agents();
  for (int i = 0; i < n; ++i) {
    for (int other = 0; other < n; ++other) {
      if (other == i) continue;
      Rational mine = 0, theirs = 0;
      for (int j : instance.prefs(i)) {
        mine += x.at(i, j);
        theirs += x.at(other, j);
        if (mine < theirs) return false;
      }
    }
  }
  return true;
}

}  // namespace maximin
