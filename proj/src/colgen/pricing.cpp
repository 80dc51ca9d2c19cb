#include <cmath>

#include "maximin/colgen.hpp"

namespace maximin::colgen {

std::vector<CellFix> fixing_from(const Instance& instance, const ProbabilisticAssignment& x) {
  const int n = instance.num_agents();
  const int m = instance.num_objects();
  std::vector<CellFix> fix(std::size_t(n) * m, CellFix::Free);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      if (x.at(i, j) == 0) fix[std::size_t(i) * m + j] = CellFix::Zero;
      if (x.at(i, j) == 1) fix[std::size_t(i) * m + j] = CellFix::One;
    }
  return fix;
}

PricingResult solve_pricing(const Instance& instance, const PricingInput& input, double tolerance,
                            const lp::SolverOptions& options) {
  const int n = instance.num_agents();
  const int m = instance.num_objects();
  if (input.cell_cost.size() != std::size_t(n) * m) throw std::invalid_argument("pricing costs have the wrong size");

  PricingResult out;
  // An agent pinned to an object she does not accept cannot be matched.
  if (!input.fixing.empty()) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j)
        if (input.fixing[std::size_t(i) * m + j] == CellFix::One && !instance.acceptable(i, j)) return out;
  }
  PeModelOptions model_options;
  model_options.fixing = input.fixing;
  PeMatchingModel model(instance, model_options);
  if (input.restriction && input.restriction->constrain) input.restriction->constrain(model);

  std::vector<lp::Term> objective;
  for (int i = 0; i < n; ++i)
    for (int j : instance.prefs(i)) {
      const double c = input.cell_cost[std::size_t(i) * m + j];
      if (c != 0.0) objective.push_back({model.assignment_var(i, j), c});
    }
  model.program().set_objective(lp::Sense::Minimize, objective, input.constant);

  lp::SolverOptions mip_options = options;
  if (!input.exact_value && !mip_options.cutoff) mip_options.cutoff = -tolerance;
  const auto res = lp::solve_mip(model.program(), mip_options);
  out.status = res.status;
  if (!res.has_incumbent && !res.optimal()) return out;
  if (res.primal.empty()) return out;
  out.best = model.decode(res.primal);
  double value = input.constant;
  for (int i = 0; i < n; ++i) {
    const int j = out.best->object_of(i);
    if (j != kOutside) value += input.cell_cost[std::size_t(i) * m + j];
  }
  out.value = value;
  if (value < -tolerance) out.column = out.best;
  return out;
}

PricingResult price_pe_matching(const Instance& instance, const ProbabilisticAssignment& x, const RmpDuals& duals,
                                int k, double tolerance, const lp::SolverOptions& options) {
  const std::size_t cells = std::size_t(instance.num_agents()) * instance.num_objects();
  PricingInput input;
  input.cell_cost.assign(cells, 0.0);
  for (std::size_t c = 0; c < cells; ++c) input.cell_cost[c] = -(duals.u.at(c) + duals.v.at(c));
  input.constant = -duals.w;
  input.fixing = fixing_from(instance, x);
  const Restriction r = cardinality_at_least(k);
  input.restriction = &r;
  return solve_pricing(instance, input, tolerance, options);
}

}  // namespace maximin::colgen
