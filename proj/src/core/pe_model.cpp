#include "maximin/pe_model.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace maximin {

PeMatchingModel::PeMatchingModel(const Instance& instance, const PeModelOptions& options)
    : agents_(instance.num_agents()), objects_(instance.num_objects()) {
  using lp::Relation;
  using lp::Term;
  const int n = agents_;
  const int m = objects_;
  if (!options.fixing.empty() && options.fixing.size() != std::size_t(n) * m)
    throw std::invalid_argument("fixing pattern has the wrong size");
  auto& P = program_;
  const auto cell = [&](int i, int j) { return "m_" + std::to_string(i) + "_" + std::to_string(j); };

  assign_.assign(std::size_t(n) * m, -1);
  for (int i = 0; i < n; ++i) {
    for (int j : instance.prefs(i)) {
      const int v = P.add_binary(cell(i, j));
      assign_[std::size_t(i) * m + j] = v;
      if (!options.fixing.empty()) {
        const CellFix fix = options.fixing[std::size_t(i) * m + j];
        if (fix == CellFix::Zero) P.set_bounds(v, 0.0, 0.0);
        if (fix == CellFix::One) P.set_bounds(v, 1.0, 1.0);
      }
    }
  }
  if (!options.fixing.empty()) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j)
        if (options.fixing[std::size_t(i) * m + j] == CellFix::One && assign_[std::size_t(i) * m + j] < 0)
          throw std::invalid_argument("cannot force an unacceptable cell");
  }

  for (int i = 0; i < n; ++i) {
    std::vector<Term> row;
    for (int j : instance.prefs(i)) row.push_back({assignment_var(i, j), 1.0});
    if (!row.empty()) P.add_constraint("row_" + std::to_string(i), row, Relation::LessEqual, 1.0);
  }
  std::vector<std::vector<Term>> column(m);
  for (int i = 0; i < n; ++i)
    for (int j : instance.prefs(i)) column[j].push_back({assignment_var(i, j), 1.0});
  for (int j = 0; j < m; ++j)
    if (!column[j].empty())
      P.add_constraint("cap_" + std::to_string(j), column[j], Relation::LessEqual, instance.capacity(j));
  if (options.min_cardinality) P.add_constraint("card", cardinality_terms(), Relation::GreaterEqual, *options.min_cardinality);

  full_.assign(m, -1);
  price_.assign(m, -1);
  for (int j = 0; j < m; ++j) {
    const std::string s = std::to_string(j);
    full_[j] = P.add_binary("f_" + s);
    P.set_priority(full_[j], 2);
    price_[j] = P.add_variable("p_" + s, 0.0, m, options.integer_prices);
    const double q = instance.capacity(j);
    // q f_j <= load_j  and  load_j + 1 <= f_j + q
    std::vector<Term> lo = {{full_[j], q}};
    for (const auto& t : column[j]) lo.push_back({t.var, -1.0});
    P.add_constraint("full_lo_" + s, lo, Relation::LessEqual, 0.0);
    std::vector<Term> hi = column[j];
    hi.push_back({full_[j], -1.0});
    P.add_constraint("full_hi_" + s, hi, Relation::LessEqual, q - 1.0);
    P.add_constraint("price_zero_" + s, {{price_[j], 1.0}, {full_[j], -double(m)}}, Relation::LessEqual, 0.0);
  }

  for (int i = 0; i < n; ++i) {
    std::vector<Term> row;
    for (int j : instance.prefs(i)) row.push_back({assignment_var(i, j), 1.0});
    for (int j : instance.prefs(i)) {
      auto terms = row;
      terms.push_back({full_[j], 1.0});
      P.add_constraint("maximal_" + std::to_string(i) + "_" + std::to_string(j), terms, Relation::GreaterEqual, 1.0);
    }
  }

  envy_.assign(std::size_t(m) * m, -1);
  count_.assign(std::size_t(m) * m, -1);
  const double big_m = m + 1.0;
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < m; ++k) {
      if (j == k) continue;
      std::vector<Term> envy;
      for (int i = 0; i < n; ++i) {
        const int rj = instance.rank(i, j);
        const int rk = instance.rank(i, k);
        if (rj >= 0 && rk >= 0 && rk < rj) envy.push_back({assignment_var(i, j), 1.0});
      }
      if (envy.empty()) continue;  // s_jk is identically zero
      const std::string s = std::to_string(j) + "_" + std::to_string(k);
      const int count = P.add_variable("s_" + s, 0.0, lp::kInfinity);
      const int flag = P.add_binary("e_" + s);
      P.set_priority(flag, 1);
      envy.push_back({count, -1.0});
      P.add_constraint("envy_" + s, envy, Relation::Equal, 0.0);
      P.add_constraint("flag_lo_" + s, {{flag, 1.0}, {count, -1.0}}, Relation::LessEqual, 0.0);
      P.add_constraint("flag_hi_" + s, {{count, 1.0}, {flag, -double(n)}}, Relation::LessEqual, 0.0);
      P.add_constraint("order_" + s, {{price_[k], 1.0}, {price_[j], -1.0}, {flag, -big_m}}, Relation::GreaterEqual,
                       1.0 - big_m);
      envy_[std::size_t(j) * m + k] = flag;
      count_[std::size_t(j) * m + k] = count;
      if (!options.strengthen) continue;
      for (int e = 0; e + 1 < static_cast<int>(envy.size()); ++e)
        P.add_constraint("link_" + std::to_string(e) + "_" + s, {{envy[e].var, 1.0}, {flag, -1.0}}, Relation::LessEqual, 0.0);
      P.add_constraint("envied_full_" + s, {{flag, 1.0}, {full_[k], -1.0}}, Relation::LessEqual, 0.0);
    }
  }
  if (!options.strengthen) return;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      const int ab = envy_var(a, b), ba = envy_var(b, a);
      if (ab >= 0 && ba >= 0)
        P.add_constraint("cycle_" + std::to_string(a) + "_" + std::to_string(b), {{ab, 1.0}, {ba, 1.0}},
                         Relation::LessEqual, 1.0);
      for (int c = b + 1; c < m; ++c) {
        // the two orientations of the triangle a, b, c
        for (const auto& tri : {std::array{a, b, c}, std::array{a, c, b}}) {
          const int x = envy_var(tri[0], tri[1]), y = envy_var(tri[1], tri[2]), z = envy_var(tri[2], tri[0]);
          if (x < 0 || y < 0 || z < 0) continue;
          P.add_constraint("cycle_" + std::to_string(tri[0]) + "_" + std::to_string(tri[1]) + "_" + std::to_string(tri[2]),
                           {{x, 1.0}, {y, 1.0}, {z, 1.0}}, Relation::LessEqual, 2.0);
        }
      }
    }
}

std::vector<lp::Term> PeMatchingModel::cardinality_terms(double coef) const {
  std::vector<lp::Term> terms;
  for (int v : assign_)
    if (v >= 0) terms.push_back({v, coef});
  return terms;
}

Matching PeMatchingModel::decode(const std::vector<double>& primal) const {
  std::vector<int> out(agents_, kOutside);
  for (int i = 0; i < agents_; ++i)
    for (int j = 0; j < objects_; ++j) {
      const int v = assignment_var(i, j);
      if (v >= 0 && primal.at(v) > 0.5) out[i] = j;
    }
  return Matching(std::move(out));
}

std::vector<double> PeMatchingModel::encode(const Instance& instance, const Matching& matching) const {
  const auto prices = equilibrium_prices(instance, matching);
  if (!prices || matching.num_agents() != agents_) return {};
  std::vector<double> x(program_.num_variables(), 0.0);
  std::vector<int> load(objects_, 0);
  for (int i = 0; i < agents_; ++i) {
    const int j = matching.object_of(i);
    if (j == kOutside) continue;
    x[assignment_var(i, j)] = 1.0;
    ++load[j];
  }
  for (int j = 0; j < objects_; ++j) {
    x[full_[j]] = load[j] == instance.capacity(j) ? 1.0 : 0.0;
    x[price_[j]] = (*prices)[j];
  }
  for (int i = 0; i < agents_; ++i) {
    const int j = matching.object_of(i);
    if (j == kOutside) continue;
    for (int k = 0; k < objects_; ++k) {
      const std::size_t c = std::size_t(j) * objects_ + k;
      if (count_[c] < 0 || !instance.prefers(i, k, j) || !instance.acceptable(i, k)) continue;
      x[count_[c]] += 1.0;
      x[envy_[c]] = 1.0;
    }
  }
  return x;
}

int extreme_pe_cardinality(const Instance& instance, Extreme direction, const lp::SolverOptions& options) {
  PeMatchingModel model(instance);
  model.program().set_objective(direction == Extreme::Min ? lp::Sense::Minimize : lp::Sense::Maximize,
                                model.cardinality_terms());
  const auto result = lp::solve_mip(model.program(), options);
  if (!result.optimal())
    throw std::runtime_error(std::string("extreme cardinality solve failed: ") + lp::to_string(result.status));
  return static_cast<int>(std::lround(result.objective));
}

}  // namespace maximin
