#include <cmath>
#include <set>

#include "doctest.h"
#include "maximin/datagen.hpp"
#include "maximin/mechanisms.hpp"
#include "maximin/pe_model.hpp"

using namespace maximin;
using namespace maximin::datagen;

namespace {

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) ma += a[k], mb += b[k];
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    sab += (a[k] - ma) * (b[k] - mb);
    saa += (a[k] - ma) * (a[k] - ma);
    sbb += (b[k] - mb) * (b[k] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

TEST_CASE("default parameters") {
  GenParams p;
  const Generated g = generate_detailed(p);
  CHECK(g.instance.num_agents() == 100);
  CHECK(g.instance.num_objects() == 10);
  int total = 0;
  for (int q : g.instance.capacities()) {
    CHECK(q >= 1);
    total += q;
  }
  CHECK(std::abs(total - 120) <= 10);
  for (int i = 0; i < g.instance.num_agents(); ++i) {
    const auto& prefs = g.instance.prefs(i);
    CHECK(!prefs.empty());
    CHECK(int(prefs.size()) <= g.instance.num_objects());
    CHECK(std::set<int>(prefs.begin(), prefs.end()).size() == prefs.size());
  }
  int popular = 0;
  for (char c : g.objects.popular) popular += c;
  CHECK(popular == 1);
}

TEST_CASE("determinism per seed") {
  GenParams p;
  p.seed = 99;
  const auto a = generate(p).raw(), b = generate(p).raw();
  REQUIRE(a.agents.size() == b.agents.size());
  for (std::size_t i = 0; i < a.agents.size(); ++i) CHECK(a.agents[i].prefs == b.agents[i].prefs);
  for (std::size_t j = 0; j < a.objects.size(); ++j) CHECK(a.objects[j].capacity == b.objects[j].capacity);
  p.seed = 100;
  const auto c = generate(p).raw();
  bool differs = false;
  for (std::size_t i = 0; i < a.agents.size(); ++i) differs |= a.agents[i].prefs != c.agents[i].prefs;
  CHECK(differs);
}

TEST_CASE("degenerate length distribution") {
  GenParams p;
  p.l_mean = 1.0;
  p.l_sd = 0.0;
  const Instance inst = generate(p);
  for (int i = 0; i < inst.num_agents(); ++i) CHECK(inst.prefs(i).size() == 1);
}

TEST_CASE("invalid parameters are rejected with every violation") {
  GenParams p;
  p.n_agents = 20;
  p.ratio = 10.0;  // two objects
  p.l_mean = 3.0;
  p.xi = 1.5;
  const auto v = p.violations();
  CHECK(v.size() == 2);
  CHECK_THROWS_AS(generate(p), std::invalid_argument);
  GenParams q;
  q.ratio = 1000.0;
  CHECK(!q.violations().empty());
}

TEST_CASE("length calibration") {
  const double loc = calibrated_length_location(2.42, 1.05, 10);
  CHECK(loc < 2.42);
  GenParams p;
  double total = 0;
  int count = 0;
  for (int s = 1; s <= 30; ++s) {
    p.seed = s;
    const Generated g = generate_detailed(p);
    for (int l : g.lengths) total += l, ++count;
  }
  CHECK(total / count == doctest::Approx(2.42).epsilon(0.05));
}

TEST_CASE("capacity and popularity correlation") {
  GenParams p;
  std::vector<double> q, eta;
  for (int s = 1; s <= 200; ++s) {
    p.seed = s;
    const Generated g = generate_detailed(p);
    for (int j = 0; j < g.instance.num_objects(); ++j) {
      q.push_back(g.objects.capacity[j]);
      eta.push_back(g.objects.popularity[j]);
    }
  }
  CHECK(std::abs(correlation(q, eta) - 0.21) < 0.10);
}

TEST_CASE("lower-bound family shape") {
  const Instance two = family_lb(2);
  CHECK(two.num_agents() == 4);
  CHECK(two.capacities() == std::vector<int>{2, 1, 1});
  CHECK(two.prefs(0) == std::vector<int>{0, 1, 2});
  CHECK(two.prefs(3) == std::vector<int>{0});
  const Instance three = family_lb(3);
  CHECK(three.num_agents() == 9);
  CHECK(three.capacities() == std::vector<int>{3, 1, 1, 1});
  for (int k : {2, 3}) CHECK(floor_int(mu(rsd_exact(family_lb(k)).assignment)) == 2 * k - 1);
  CHECK_THROWS_AS(family_lb(1), std::invalid_argument);
}

TEST_CASE("upper-bound family shape") {
  const Instance two = family_ub(2);
  CHECK(two.num_agents() == 4);
  CHECK(two.capacities() == std::vector<int>{2, 2});
  CHECK(two.prefs(1) == std::vector<int>{0, 1});
  CHECK(two.prefs(2) == std::vector<int>{0});
  for (int l = 2; l <= 4; ++l) CHECK(extreme_pe_cardinality(family_ub(l), Extreme::Min, {}) == l);
}
