#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "fixtures.hpp"
#include "maximin/mechanisms.hpp"
#include "maximin/random.hpp"

using namespace maximin;

namespace {

// Average of SD over all |N|! orderings, one by one.
ProbabilisticAssignment brute_force_rsd(const Instance& inst) {
  std::vector<int> order(inst.num_agents());
  std::iota(order.begin(), order.end(), 0);
  ProbabilisticAssignment x(inst.num_agents(), inst.num_objects());
  long count = 0;
  do {
    const Matching mt = serial_dictatorship(inst, order);
    for (int i = 0; i < inst.num_agents(); ++i)
      if (mt.assigned(i)) x.at(i, mt.object_of(i)) += 1;
    ++count;
  } while (std::next_permutation(order.begin(), order.end()));
  for (int i = 0; i < inst.num_agents(); ++i)
    for (int j = 0; j < inst.num_objects(); ++j) x.at(i, j) /= count;
  return x;
}

}  // namespace

TEST_CASE("exact RSD on the four-agent example") {
  const auto est = rsd_exact(fixtures::example_one());
  CHECK(est.exact);
  CHECK(est.assignment == fixtures::x_one());
  CHECK(mu(est.assignment) == 3);

  const Instance one = fixtures::make_instance({1}, {{0}});
  CHECK(rsd_exact(one).assignment.at(0, 0) == 1);
}

TEST_CASE("exact RSD agrees with full permutation enumeration") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const Instance inst = fixtures::random_instance(rng, 6, 4);
    const auto est = rsd_exact(inst);
    REQUIRE(est.assignment == brute_force_rsd(inst));
    REQUIRE(is_feasible(inst, est.assignment));
    mpz_class fact;
    mpz_fac_ui(fact.get_mpz_t(), inst.num_agents());
    for (int i = 0; i < inst.num_agents(); ++i)
      for (int j = 0; j < inst.num_objects(); ++j) REQUIRE(fact % est.assignment.at(i, j).get_den() == 0);
  }
}

TEST_CASE("exact RSD ordering limit") {
  const Instance distinct = fixtures::make_instance({1}, {{0}, {}, {0}, {}, {0}, {}, {0}, {}, {0}, {}});
  // two types of five agents each: 10!/(5!5!) = 252 orderings
  CHECK(rsd_exact_orderings(distinct) == 252);
  CHECK_THROWS_AS(rsd_exact(distinct, 100), std::length_error);
  CHECK(rsd_exact(distinct).assignment.at(0, 0) == Rational(1, 5));
}

TEST_CASE("sampled RSD") {
  const Instance ex = fixtures::example_one();
  const auto one = rsd_sampled(ex, 1, 5);
  CHECK(one.assignment.is_integral());
  CHECK(mu(one.assignment) >= 2);

  const auto a = rsd_sampled(ex, 2000, 42);
  const auto b = rsd_sampled(ex, 2000, 42);
  CHECK(a.assignment == b.assignment);
  CHECK(a.sample_count == 2000);
  CHECK_FALSE(a.exact);
  const auto c = rsd_sampled(ex, 2000, 42, 4, 1);
  const auto d = rsd_sampled(ex, 2000, 42, 4, 3);
  CHECK(c.assignment == d.assignment);

  const auto big = rsd_sampled(ex, 100000, 1);
  const auto exact = fixtures::x_one();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 3; ++j) CHECK(std::abs(to_double(big.assignment.at(i, j) - exact.at(i, j))) < 0.01);
  CHECK_THROWS_AS(rsd_sampled(ex, 0, 1), std::invalid_argument);
}

TEST_CASE("sampled RSD is unbiased across seeds") {
  const Instance ex = fixtures::example_one();
  const auto exact = fixtures::x_one();
  std::vector<double> mean(12, 0.0);
  for (int seed = 0; seed < 50; ++seed) {
    const auto est = rsd_sampled(ex, 10000, 1000 + seed);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 3; ++j) mean[i * 3 + j] += to_double(est.assignment.at(i, j)) / 50.0;
  }
  double dev = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 3; ++j) dev += std::abs(mean[i * 3 + j] - to_double(exact.at(i, j)));
  CHECK(dev / 12.0 < 0.005);
}

TEST_CASE("bounded integers and shuffles are stable") {
  Rng rng(123);
  std::vector<int> counts(5, 0);
  for (int k = 0; k < 50000; ++k) ++counts[uniform_below(rng, 5)];
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
  Rng r1(8), r2(8);
  CHECK(random_ordering(r1, 10) == random_ordering(r2, 10));
}

TEST_CASE("probabilistic serial by hand") {
  const auto x = probabilistic_serial(fixtures::example_one());
  CHECK(x == fixtures::matrix({{"1/2", "1/2", "0"}, {"1/2", "1/2", "0"}, {"1/2", "0", "0"}, {"1/2", "0", "0"}}));
  const Instance one = fixtures::make_instance({1}, {{0}});
  CHECK(probabilistic_serial(one).at(0, 0) == 1);
  const Instance empty = fixtures::make_instance({1}, {{}, {0}});
  const auto y = probabilistic_serial(empty);
  CHECK(y.row_sum(0) == 0);
  CHECK(y.at(1, 0) == 1);
}

TEST_CASE("probabilistic serial properties on random instances") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const Instance inst = fixtures::random_instance(rng, 8, 5, 3);
    const auto x = probabilistic_serial(inst);
    REQUIRE(is_feasible(inst, x));
    REQUIRE(is_envy_free(inst, x));
    for (int j = 0; j < inst.num_objects(); ++j) {
      const Rational col = x.column_sum(j);
      if (col < inst.capacity(j)) {
        // not exhausted: every agent who lists it ate until done with it
        for (int i = 0; i < inst.num_agents(); ++i)
          if (inst.acceptable(i, j)) REQUIRE(x.row_sum(i) == 1);
      }
    }
    for (int i = 0; i < inst.num_agents(); ++i) {
      if (x.row_sum(i) == 1) continue;
      // stopped early: everything she lists ran out
      for (int j : inst.prefs(i)) REQUIRE(x.column_sum(j) == inst.capacity(j));
    }
  }
}

TEST_CASE("envy-freeness checks") {
  const Instance inst = fixtures::make_instance({1, 1}, {{0, 1}, {0, 1}});
  CHECK(is_envy_free(inst, fixtures::matrix({{"1/2", "1/2"}, {"1/2", "1/2"}})));
  CHECK_FALSE(is_envy_free(inst, fixtures::matrix({{"0", "1"}, {"1", "0"}})));
}
