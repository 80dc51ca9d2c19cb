#include <algorithm>
#include <chrono>
#include <functional>
#include <optional>
#include <cmath>
#include <random>

#include "doctest.h"
#include "maximin/lp.hpp"

using namespace maximin::lp;

namespace {

// Dense Gaussian elimination with partial pivoting; false when singular.
bool solve_square(std::vector<std::vector<double>> a, std::vector<double> b, std::vector<double>& x) {
  const int n = static_cast<int>(b.size());
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    if (std::abs(a[p][c]) < 1e-10) return false;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  x.resize(n);
  for (int i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return true;
}

// Optimum of a bounded LP by enumerating every basic solution.
std::optional<double> vertex_oracle(const LinearProgram& lp) {
  const int n = lp.num_variables();
  struct Hyper {
    std::vector<double> a;
    double b;
    bool must;
  };
  std::vector<Hyper> hypers;
  for (const auto& c : lp.constraints()) {
    std::vector<double> a(n, 0.0);
    for (const auto& t : c.terms) a[t.var] += t.coef;
    hypers.push_back({a, c.rhs, c.relation == Relation::Equal});
  }
  for (int j = 0; j < n; ++j) {
    std::vector<double> a(n, 0.0);
    a[j] = 1.0;
    if (std::isfinite(lp.variable(j).lower)) hypers.push_back({a, lp.variable(j).lower, false});
    if (std::isfinite(lp.variable(j).upper)) hypers.push_back({a, lp.variable(j).upper, false});
  }
  const int h = static_cast<int>(hypers.size());
  std::optional<double> best;
  std::vector<int> pick(n);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n) {
      for (int k = 0; k < h; ++k) {
        if (!hypers[k].must) continue;
        if (std::find(pick.begin(), pick.end(), k) == pick.end()) return;
      }
      std::vector<std::vector<double>> a;
      std::vector<double> b;
      for (int k : pick) {
        a.push_back(hypers[k].a);
        b.push_back(hypers[k].b);
      }
      std::vector<double> x;
      if (!solve_square(a, b, x)) return;
      if (max_violation(lp, x) > 1e-7) return;
      double obj = lp.objective_constant();
      for (const auto& t : lp.objective()) obj += t.coef * x[t.var];
      if (!best) best = obj;
      else best = lp.sense() == Sense::Minimize ? std::min(*best, obj) : std::max(*best, obj);
      return;
    }
    for (int k = start; k < h; ++k) {
      pick[depth] = k;
      rec(k + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

LinearProgram random_lp(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-3.0, 5.0);
  std::uniform_int_distribution<int> rel(0, 5);
  LinearProgram lp;
  for (int j = 0; j < 5; ++j) lp.add_variable("x" + std::to_string(j), 0.0, 4.0);
  for (int i = 0; i < 5; ++i) {
    std::vector<Term> terms;
    for (int j = 0; j < 5; ++j) terms.push_back({j, std::round(coef(rng))});
    const int r = rel(rng);
    const Relation relation = r < 3 ? Relation::LessEqual : r < 5 ? Relation::GreaterEqual : Relation::Equal;
    lp.add_constraint("r" + std::to_string(i), terms, relation, std::round(coef(rng) * 2));
  }
  std::vector<Term> obj;
  for (int j = 0; j < 5; ++j) obj.push_back({j, std::round(coef(rng))});
  lp.set_objective(rel(rng) % 2 ? Sense::Minimize : Sense::Maximize, obj);
  return lp;
}

}  // namespace

TEST_CASE("single bounded variable") {
  LinearProgram lp;
  const int x = lp.add_variable("x");
  lp.add_constraint("cap", {{x, 1.0}}, Relation::LessEqual, 1.0);
  lp.set_objective(Sense::Maximize, {{x, 1.0}});
  const auto res = solve_lp(lp);
  REQUIRE(res.optimal());
  CHECK(res.primal[x] == doctest::Approx(1.0));
  CHECK(res.duals[0] == doctest::Approx(1.0));
  CHECK(res.objective == doctest::Approx(1.0));
}

TEST_CASE("covering row with a cap") {
  LinearProgram lp;
  const int x = lp.add_variable("x");
  const int y = lp.add_variable("y");
  lp.add_constraint("cover", {{x, 1.0}, {y, 1.0}}, Relation::GreaterEqual, 2.0);
  lp.add_constraint("cap", {{x, 1.0}}, Relation::LessEqual, 1.0);
  lp.set_objective(Sense::Minimize, {{x, 1.0}, {y, 1.0}});
  const auto res = solve_lp(lp);
  REQUIRE(res.optimal());
  CHECK(res.objective == doctest::Approx(2.0));
  CHECK(res.duals[0] == doctest::Approx(1.0));
  CHECK(res.duals[1] == doctest::Approx(0.0));
}

TEST_CASE("infeasible and unbounded statuses") {
  LinearProgram bad;
  const int x = bad.add_variable("x");
  bad.add_constraint("lo", {{x, 1.0}}, Relation::GreaterEqual, 3.0);
  bad.add_constraint("hi", {{x, 1.0}}, Relation::LessEqual, 2.0);
  bad.set_objective(Sense::Minimize, {{x, 1.0}});
  CHECK(solve_lp(bad).status == Status::Infeasible);

  LinearProgram open;
  const int y = open.add_variable("y");
  open.add_constraint("lo", {{y, 1.0}}, Relation::GreaterEqual, 1.0);
  open.set_objective(Sense::Maximize, {{y, 1.0}});
  CHECK(solve_lp(open).status == Status::Unbounded);
}

TEST_CASE("free variables and equality rows") {
  LinearProgram lp;
  const int x = lp.add_variable("x", -kInfinity, kInfinity);
  const int y = lp.add_variable("y", -kInfinity, 2.0);
  lp.add_constraint("sum", {{x, 1.0}, {y, 1.0}}, Relation::Equal, 1.0);
  lp.add_constraint("diff", {{x, 1.0}, {y, -1.0}}, Relation::LessEqual, 5.0);
  lp.set_objective(Sense::Minimize, {{x, 1.0}, {y, 2.0}});
  const auto res = solve_lp(lp);
  REQUIRE(res.optimal());
  CHECK(res.primal[x] == doctest::Approx(3.0));
  CHECK(res.primal[y] == doctest::Approx(-2.0));
  CHECK(res.objective == doctest::Approx(-1.0));
}

TEST_CASE("random 5x5 programs agree with vertex enumeration") {
  std::mt19937_64 rng(20240611);
  int feasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const LinearProgram lp = random_lp(rng);
    const auto oracle = vertex_oracle(lp);
    const auto res = solve_lp(lp);
    if (!oracle) {
      CHECK(res.status == Status::Infeasible);
      continue;
    }
    ++feasible;
    REQUIRE(res.optimal());
    CHECK(res.objective == doctest::Approx(*oracle).epsilon(1e-7));
    CHECK(max_violation(lp, res.primal) <= 1e-7);
    // strong duality
    CHECK(std::abs(dual_objective(lp, res) - res.objective) <= 1e-4);
  }
  CHECK(feasible > 50);
}

TEST_CASE("identical statements give bit-identical results") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const LinearProgram lp = random_lp(rng);
    const auto a = solve_lp(lp);
    const auto b = solve_lp(lp);
    CHECK(a.status == b.status);
    CHECK(a.primal == b.primal);
    CHECK(a.duals == b.duals);
  }
}

TEST_CASE("appending columns re-optimizes from the previous basis") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  // min s  s.t.  sum_t l_t a_t >= x - s,  sum l = 1 (a tiny covering master)
  const int rows = 6;
  LinearProgram base;
  const int s = base.add_variable("s");
  std::vector<double> target(rows);
  for (int i = 0; i < rows; ++i) {
    target[i] = u(rng);
    base.add_constraint("cov" + std::to_string(i), {{s, 1.0}}, Relation::GreaterEqual, target[i]);
  }
  base.add_constraint("convex", {}, Relation::Equal, 1.0);
  base.set_objective(Sense::Minimize, {{s, 1.0}});

  SimplexSolver incremental(base);
  LinearProgram fresh = base;
  std::vector<Term> col;
  for (int i = 0; i < rows; ++i) col.push_back({i, 1.0});
  col.push_back({rows, 1.0});
  incremental.add_column("all", 0.0, col);
  fresh.add_variable("all");
  auto append = [&](LinearProgram& lp, const std::vector<Term>& c) {
    const int v = lp.num_variables() - 1;
    std::vector<Constraint> rebuilt = lp.constraints();
    LinearProgram copy;
    for (const auto& var : lp.variables()) copy.add_variable(var.name, var.lower, var.upper);
    for (int i = 0; i < static_cast<int>(rebuilt.size()); ++i) {
      auto terms = rebuilt[i].terms;
      for (const auto& e : c)
        if (e.var == i) terms.push_back({v, e.coef});
      copy.add_constraint(rebuilt[i].name, terms, rebuilt[i].relation, rebuilt[i].rhs);
    }
    copy.set_objective(lp.sense(), lp.objective());
    lp = copy;
  };
  append(fresh, col);
  CHECK(incremental.solve().objective == doctest::Approx(solve_lp(fresh).objective));

  for (int k = 0; k < 15; ++k) {
    std::vector<Term> c;
    for (int i = 0; i < rows; ++i)
      if (u(rng) < 0.5) c.push_back({i, 1.0});
    c.push_back({rows, 1.0});
    incremental.add_column("c" + std::to_string(k), 0.0, c);
    fresh.add_variable("c" + std::to_string(k));
    append(fresh, c);
    const auto a = incremental.solve();
    const auto b = solve_lp(fresh);
    REQUIRE(a.optimal());
    CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-9));
  }
}

TEST_CASE("knapsack branch and bound matches exhaustive enumeration") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> w(1, 9);
  for (int trial = 0; trial < 50; ++trial) {
    const int weights[3] = {w(rng), w(rng), w(rng)};
    const int values[3] = {w(rng), w(rng), w(rng)};
    const int cap = w(rng) + 3;
    LinearProgram lp;
    std::vector<Term> row, obj;
    for (int k = 0; k < 3; ++k) {
      const int v = lp.add_binary("item" + std::to_string(k));
      row.push_back({v, double(weights[k])});
      obj.push_back({v, double(values[k])});
    }
    lp.add_constraint("cap", row, Relation::LessEqual, cap);
    lp.set_objective(Sense::Maximize, obj);
    int best = 0;
    for (int mask = 0; mask < 8; ++mask) {
      int wt = 0, val = 0;
      for (int k = 0; k < 3; ++k)
        if (mask >> k & 1) wt += weights[k], val += values[k];
      if (wt <= cap) best = std::max(best, val);
    }
    const auto res = solve_mip(lp);
    REQUIRE(res.optimal());
    CHECK(res.objective == doctest::Approx(best));
    // the relaxation bounds the integer optimum from above
    LinearProgram relaxed;
    for (const auto& v : lp.variables()) relaxed.add_variable(v.name, 0.0, 1.0);
    relaxed.add_constraint("cap", row, Relation::LessEqual, cap);
    relaxed.set_objective(Sense::Maximize, obj);
    CHECK(solve_lp(relaxed).objective >= res.objective - 1e-9);
  }
}

TEST_CASE("bound changes re-solve from the previous basis") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> coef(-3.0, 3.0), pos(0.5, 4.0);
  for (int trial = 0; trial < 60; ++trial) {
    LinearProgram lp;
    const int n = 8;
    std::vector<Term> obj;
    for (int j = 0; j < n; ++j) {
      lp.add_variable("x" + std::to_string(j), 0.0, 2.0);
      obj.push_back({j, coef(rng)});
    }
    for (int r = 0; r < 6; ++r) {
      std::vector<Term> row;
      for (int j = 0; j < n; ++j) row.push_back({j, pos(rng)});
      lp.add_constraint("r" + std::to_string(r), row, r % 2 ? Relation::LessEqual : Relation::GreaterEqual,
                        r % 2 ? 12.0 : 2.0);
    }
    lp.set_objective(Sense::Minimize, obj);
    SimplexSolver solver(lp);
    REQUIRE(solver.solve().optimal());
    LinearProgram changed = lp;
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int step = 0; step < 5; ++step) {
      const int j = pick(rng);
      const double lo = std::uniform_int_distribution<int>(0, 1)(rng);
      const double up = lo + std::uniform_int_distribution<int>(0, 1)(rng);
      solver.set_bounds(j, lo, up);
      changed.set_bounds(j, lo, up);
      const auto warm = solver.solve();
      const auto cold = solve_lp(changed);
      REQUIRE(warm.status == cold.status);
      if (cold.optimal()) {
        CHECK(warm.objective == doctest::Approx(cold.objective).epsilon(1e-9));
        CHECK(max_violation(changed, warm.primal) <= 1e-7);
      }
    }
  }
}

TEST_CASE("cutoff and incumbent hint") {
  LinearProgram lp;
  std::vector<Term> row, obj;
  const int weights[6] = {5, 4, 6, 3, 7, 2}, values[6] = {10, 7, 12, 5, 13, 3};
  for (int k = 0; k < 6; ++k) {
    const int v = lp.add_binary("item" + std::to_string(k));
    row.push_back({v, double(weights[k])});
    obj.push_back({v, double(values[k])});
  }
  lp.add_constraint("cap", row, Relation::LessEqual, 15.0);
  lp.set_objective(Sense::Maximize, obj);
  const auto plain = solve_mip(lp);
  REQUIRE(plain.optimal());
  CHECK(plain.objective == doctest::Approx(29.0));

  SolverOptions above;
  above.cutoff = 29.0;
  CHECK(solve_mip(lp, above).status == Status::Infeasible);
  SolverOptions below;
  below.cutoff = 20.0;
  const auto cut = solve_mip(lp, below);
  REQUIRE(cut.optimal());
  CHECK(cut.objective == doctest::Approx(29.0));

  SolverOptions hinted;
  hinted.incumbent_hint = {1, 1, 0, 0, 0, 1};
  hinted.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
  const auto stopped = solve_mip(lp, hinted);
  CHECK(stopped.status == Status::TimeLimit);
  CHECK(stopped.has_incumbent);
  CHECK(stopped.objective == doctest::Approx(20.0));
  CHECK(stopped.bound >= 29.0 - 1e-9);
  hinted.incumbent_hint = {1, 1, 1, 1, 1, 1};  // over capacity: ignored
  CHECK(!solve_mip(lp, hinted).has_incumbent);
}

TEST_CASE("branching priorities do not change the optimum") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> w(1, 20);
  for (int trial = 0; trial < 20; ++trial) {
    LinearProgram a;
    std::vector<Term> row, obj;
    for (int k = 0; k < 12; ++k) {
      const int v = a.add_binary("item" + std::to_string(k));
      row.push_back({v, double(w(rng))});
      obj.push_back({v, double(w(rng))});
    }
    a.add_constraint("cap", row, Relation::LessEqual, 60.0);
    a.set_objective(Sense::Maximize, obj);
    LinearProgram b = a;
    for (int k = 0; k < 12; k += 3) b.set_priority(k, 1);
    CHECK(solve_mip(a).objective == doctest::Approx(solve_mip(b).objective));
  }
}

TEST_CASE("fully fixed MIP returns the fixed point") {
  LinearProgram lp;
  const int a = lp.add_variable("a", 2.0, 2.0, true);
  const int b = lp.add_variable("b", 1.0, 1.0, true);
  lp.add_constraint("r", {{a, 1.0}, {b, 1.0}}, Relation::LessEqual, 10.0);
  lp.set_objective(Sense::Minimize, {{a, 3.0}, {b, 1.0}});
  const auto res = solve_mip(lp);
  REQUIRE(res.optimal());
  CHECK(res.primal[a] == 2.0);
  CHECK(res.primal[b] == 1.0);
  CHECK(res.objective == doctest::Approx(7.0));
}

TEST_CASE("LP file dump names every section") {
  LinearProgram lp;
  const int x = lp.add_variable("x", 0, 3, true);
  const int y = lp.add_variable("y", -kInfinity, kInfinity);
  lp.add_constraint("row", {{x, 2.0}, {y, -1.0}}, Relation::GreaterEqual, 1.0);
  lp.set_objective(Sense::Maximize, {{x, 1.0}});
  const std::string text = to_lp_format(lp);
  CHECK(text.find("Maximize") != std::string::npos);
  CHECK(text.find("row: 2 x - 1 y >= 1") != std::string::npos);
  CHECK(text.find("y free") != std::string::npos);
  CHECK(text.find("General") != std::string::npos);
}
