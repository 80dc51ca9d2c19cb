#include <algorithm>

#include "maximin/colgen.hpp"
#include "maximin/random.hpp"

namespace maximin::colgen {

Budget Budget::seconds(double limit) {
  Budget b;
  b.deadline = std::chrono::steady_clock::now() +
               std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(limit));
  return b;
}

bool ColumnPool::add(const Matching& matching) {
  if (!index_.emplace(matching, columns_.size()).second) return false;
  columns_.push_back(matching);
  cardinality_.push_back(matching.cardinality());
  return true;
}

ColumnPool initial_columns(const Instance& instance, int min_cardinality, long long samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("sample count must be >= 1");
  ColumnPool pool;
  Rng rng(seed);
  for (long long s = 0; s < samples; ++s) {
    const Matching mt = serial_dictatorship(instance, random_ordering(rng, instance.num_agents()));
    if (mt.cardinality() >= min_cardinality) pool.add(mt);
  }
  return pool;
}

Restriction cardinality_at_least(int k) {
  Restriction r;
  r.label = "cardinality>=" + std::to_string(k);
  r.admits = [k](const Matching& mt) { return mt.cardinality() >= k; };
  r.constrain = [k](PeMatchingModel& model) {
    if (k > 0) model.program().add_constraint("card", model.cardinality_terms(), lp::Relation::GreaterEqual, k);
  };
  return r;
}

Restriction unrestricted() {
  Restriction r;
  r.label = "all";
  r.admits = [](const Matching&) { return true; };
  r.constrain = [](PeMatchingModel&) {};
  return r;
}

const char* to_string(Framework f) { return f == Framework::Rmp ? "rmp" : "alpha"; }

const char* to_string(MdsdStatus s) {
  switch (s) {
    case MdsdStatus::Optimal:
      return "optimal";
    case MdsdStatus::BudgetExhausted:
      return "budget-exhausted";
    case MdsdStatus::NotDecomposable:
      return "not-decomposable";
  }
  return "unknown";
}

Decomposition weights_to_decomposition(int num_agents, int num_objects, const std::vector<Matching>& columns,
                                       const std::vector<double>& weights, double threshold) {
  Decomposition d{num_agents, num_objects, {}};
  for (std::size_t t = 0; t < columns.size() && t < weights.size(); ++t) {
    if (weights[t] <= threshold) continue;
    Rational w = approximate(weights[t], 1'000'000'000);
    if (w <= 0) continue;
    d.terms.push_back({w, columns[t]});
  }
  if (d.terms.empty()) return d;
  Rational total = 0;
  for (const auto& t : d.terms) total += t.weight;
  for (auto& t : d.terms) t.weight /= total;
  return d;
}

Decomposition refine_exact(const ProbabilisticAssignment& x, const Decomposition& approx) {
  const int n = x.num_agents(), m = x.num_objects();
  const std::size_t T = approx.terms.size();
  if (T == 0 || approx.num_agents != n || approx.num_objects != m) return approx;

  // rows: every cell some term uses or x covers, plus the weights summing to one
  std::vector<std::vector<Rational>> rows;
  std::vector<char> used(std::size_t(n) * m, 0);
  for (const auto& t : approx.terms)
    for (int i = 0; i < n; ++i)
      if (t.matching.assigned(i)) used[std::size_t(i) * m + t.matching.object_of(i)] = 1;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      if (!used[std::size_t(i) * m + j]) {
        if (x.at(i, j) != 0) return approx;
        continue;
      }
      std::vector<Rational> row(T + 1);
      for (std::size_t t = 0; t < T; ++t)
        if (approx.terms[t].matching.object_of(i) == j) row[t] = 1;
      row[T] = x.at(i, j);
      rows.push_back(std::move(row));
    }
  }
  rows.emplace_back(T + 1, Rational(1));

  // Gauss-Jordan
  std::vector<int> pivot_of(T, -1);
  std::size_t r = 0;
  for (std::size_t c = 0; c < T && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    const Rational inv = 1 / rows[r][c];
    for (auto& v : rows[r]) v *= inv;
    for (std::size_t q = 0; q < rows.size(); ++q) {
      if (q == r || rows[q][c] == 0) continue;
      const Rational f = rows[q][c];
      for (std::size_t k = c; k <= T; ++k)
        if (rows[r][k] != 0) rows[q][k] -= f * rows[r][k];
    }
    pivot_of[c] = static_cast<int>(r++);
  }
  for (std::size_t q = r; q < rows.size(); ++q)
    if (rows[q][T] != 0) return approx;

  std::vector<Rational> w(T);
  for (std::size_t c = 0; c < T; ++c)
    if (pivot_of[c] < 0) w[c] = approx.terms[c].weight;
  for (std::size_t c = 0; c < T; ++c) {
    if (pivot_of[c] < 0) continue;
    const auto& row = rows[pivot_of[c]];
    Rational v = row[T];
    for (std::size_t f = 0; f < T; ++f)
      if (pivot_of[f] < 0 && row[f] != 0) v -= row[f] * w[f];
    if (v < 0) return approx;
    w[c] = v;
  }

  Decomposition d{n, m, {}};
  for (std::size_t t = 0; t < T; ++t)
    if (w[t] > 0) d.terms.push_back({w[t], approx.terms[t].matching});
  if (d.terms.empty() || recompose(d) != x) return approx;
  return d;
}

}  // namespace maximin::colgen
