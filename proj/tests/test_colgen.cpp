#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "maximin/colgen.hpp"
#include "maximin/datagen.hpp"
#include "maximin/mechanisms.hpp"

using namespace maximin;
using namespace maximin::colgen;

namespace {

void check_decomposition(const Instance& inst, const ProbabilisticAssignment& x, const Decomposition& d, int min_card) {
  REQUIRE(!d.terms.empty());
  CHECK(recompose(d) == x);
  for (const auto& t : d.terms) {
    CHECK(is_pareto_efficient(inst, t.matching));
    CHECK(t.matching.cardinality() >= min_card);
  }
}

double reduced_cost(const PricingInput& in, int m, const Matching& mt) {
  double v = in.constant;
  for (int i = 0; i < mt.num_agents(); ++i)
    if (mt.assigned(i)) v += in.cell_cost[std::size_t(i) * m + mt.object_of(i)];
  return v;
}

}  // namespace

TEST_CASE("rmp objective on fixed pools") {
  const Instance ex = fixtures::example_one();
  const auto x1 = fixtures::x_one();
  const Matching m1({1, 0, 0, kOutside}), m2({0, 1, kOutside, 0});

  ColumnPool none;
  const RmpSolution only_super = solve_rmp(ex, x1, none, 3);
  REQUIRE(only_super.status == lp::Status::Optimal);
  CHECK(only_super.s == doctest::Approx(1.0));

  ColumnPool two;
  two.add(m1);
  two.add(m2);
  const RmpSolution partial = solve_rmp(ex, x1, two, 3);
  REQUIRE(partial.status == lp::Status::Optimal);
  CHECK(partial.s > 1e-4);

  // exact RSD is a lottery over serial-dictatorship outcomes
  ColumnPool all;
  for (const auto& mt : enumerate_pe_matchings(ex)) all.add(mt);
  CHECK(solve_rmp(ex, x1, all, 0).s == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(solve_rmp(ex, x1, all, 3).s > 1e-4);
}

TEST_CASE("pricing with zero duals finds no column") {
  const Instance ex = fixtures::example_one();
  RmpDuals d;
  d.u.assign(12, 0.0);
  d.v.assign(12, 0.0);
  const PricingResult r = price_pe_matching(ex, fixtures::x_one(), d, 2);
  CHECK(!r.column);
  // no PE matching of example one assigns five agents
  CHECK(price_pe_matching(ex, fixtures::x_one(), d, 5).status == lp::Status::Infeasible);
}

TEST_CASE("pricing optimum equals enumeration optimum") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> cost(-2.0, 1.0);
  for (int trial = 0; trial < 150; ++trial) {
    const Instance inst = fixtures::random_instance(rng, 5, 4, 2);
    const int n = inst.num_agents(), m = inst.num_objects();
    const auto pe = enumerate_pe_matchings(inst);
    int p_plus = 0;
    for (const auto& mt : pe) p_plus = std::max(p_plus, mt.cardinality());
    const int k = std::uniform_int_distribution<int>(0, p_plus + 1)(rng);
    const Restriction r = cardinality_at_least(k);
    PricingInput in;
    in.cell_cost.resize(std::size_t(n) * m);
    for (auto& c : in.cell_cost) c = cost(rng);
    in.constant = cost(rng);
    in.restriction = &r;
    in.exact_value = true;
    double best = lp::kInfinity;
    for (const auto& mt : pe)
      if (mt.cardinality() >= k) best = std::min(best, reduced_cost(in, m, mt));
    const PricingResult res = solve_pricing(inst, in);
    if (best == lp::kInfinity) {
      CHECK(res.status == lp::Status::Infeasible);
      continue;
    }
    REQUIRE(res.status == lp::Status::Optimal);
    REQUIRE(res.best);
    CHECK(is_pareto_efficient(inst, *res.best));
    CHECK(res.best->cardinality() >= k);
    CHECK(res.value == doctest::Approx(best).epsilon(1e-7));
    CHECK(reduced_cost(in, m, *res.best) == doctest::Approx(best).epsilon(1e-7));
    CHECK(bool(res.column) == (best < -kDefaultTolerance));
  }
}

TEST_CASE("lower-bound family end to end") {
  for (int k : {2, 3}) {
    const Instance inst = datagen::family_lb(k);
    const auto rsd = rsd_exact(inst);
    CHECK(floor_int(mu(rsd.assignment)) == 2 * k - 1);
    for (Framework f : {Framework::Rmp, Framework::Alpha}) {
      SearchOptions opts;
      opts.framework = f;
      opts.initial_samples = 200;
      const MdsdResult r = binary_search_z(inst, rsd.assignment, opts);
      CHECK(r.status == MdsdStatus::Optimal);
      CHECK(r.z == k);
      CHECK(r.upper_bound == 2 * k - 1);
      check_decomposition(inst, rsd.assignment, r.decomposition, k);
    }
  }
}

TEST_CASE("alpha value on the lower-bound family") {
  const Instance inst = datagen::family_lb(2);
  const auto x = rsd_exact(inst).assignment;
  ColumnPool pool = initial_columns(inst, 0, 100, 3);
  const KOutcome o = solve_mdsd_alpha(inst, x, cardinality_at_least(3), pool);
  CHECK(o.decided);
  CHECK(!o.feasible);
  CHECK(o.objective == doctest::Approx(5.0 / 6.0).epsilon(1e-4));

  ColumnPool pool2 = initial_columns(inst, 0, 100, 3);
  const KOutcome rmp = solve_mdsd_rmp(inst, x, cardinality_at_least(3), pool2);
  CHECK(rmp.decided);
  CHECK(!rmp.feasible);
  CHECK(rmp.objective > 1e-4);
}

TEST_CASE("upper-bound family reaches 2l-1") {
  for (int l = 2; l <= 5; ++l) {
    const Instance inst = datagen::family_ub(l);
    const auto x = rsd_exact(inst).assignment;
    const Restriction r = cardinality_at_least(2 * l - 1);
    for (Framework f : {Framework::Rmp, Framework::Alpha}) {
      ColumnPool pool = initial_columns(inst, 0, 200, 5);
      const KOutcome o = f == Framework::Rmp ? solve_mdsd_rmp(inst, x, r, pool) : solve_mdsd_alpha(inst, x, r, pool);
      CHECK(o.feasible);
      check_decomposition(inst, x, o.decomposition, 2 * l - 1);
    }
  }
}

TEST_CASE("single matching decomposes at its own cardinality") {
  const Instance ex = fixtures::example_one();
  for (const auto& mt : enumerate_pe_matchings(ex)) {
    const auto x = ProbabilisticAssignment::from_matching(mt, ex.num_objects());
    for (Framework f : {Framework::Rmp, Framework::Alpha}) {
      SearchOptions opts;
      opts.framework = f;
      opts.initial_samples = 50;
      const MdsdResult r = binary_search_z(ex, x, opts);
      CHECK(r.status == MdsdStatus::Optimal);
      CHECK(r.z == mt.cardinality());
      REQUIRE(r.decomposition.terms.size() == 1);
      CHECK(r.decomposition.terms[0].matching == mt);
    }
  }
}

TEST_CASE("non-PE assignment is not decomposable") {
  const Instance ex = fixtures::example_one();
  // agent 1 takes c while b is free: not maximal
  const auto x = ProbabilisticAssignment::from_matching(Matching({2, 0, 0, kOutside}), 3);
  for (Framework f : {Framework::Rmp, Framework::Alpha}) {
    SearchOptions opts;
    opts.framework = f;
    opts.initial_samples = 50;
    CHECK(binary_search_z(ex, x, opts).status == MdsdStatus::NotDecomposable);
  }
}

TEST_CASE("frameworks agree on small random instances") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const Instance inst = fixtures::random_instance(rng, 5, 4, 2);
    const auto x = rsd_exact(inst).assignment;
    for (int k = 0; k <= floor_int(mu(x)); ++k) {
      ColumnPool p1 = initial_columns(inst, 0, 30, trial), p2 = p1;
      const KOutcome a = solve_mdsd_rmp(inst, x, cardinality_at_least(k), p1);
      const KOutcome b = solve_mdsd_alpha(inst, x, cardinality_at_least(k), p2);
      REQUIRE(a.decided);
      REQUIRE(b.decided);
      CHECK(a.feasible == b.feasible);
      CHECK(b.feasible == (b.objective >= 1 - 1e-4));
    }
  }
}

TEST_CASE("weights to decomposition") {
  const std::vector<Matching> cols{Matching({0, kOutside}), Matching({kOutside, 0})};
  const Decomposition d = weights_to_decomposition(2, 1, cols, {0.3333333333333, 0.6666666666667});
  REQUIRE(d.terms.size() == 2);
  CHECK(d.terms[0].weight == Rational(1, 3));
  CHECK(d.terms[0].weight + d.terms[1].weight == 1);
  CHECK(weights_to_decomposition(2, 1, cols, {1.0, 1e-12}).terms.size() == 1);
}
