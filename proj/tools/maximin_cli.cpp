#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "maximin/bvn.hpp"
#include "maximin/colgen.hpp"
#include "maximin/datagen.hpp"
#include "maximin/experiment.hpp"
#include "maximin/io.hpp"
#include "maximin/mechanisms.hpp"
#include "maximin/pe_model.hpp"
#include "maximin/popularity.hpp"
#include "maximin/random.hpp"

using namespace maximin;

namespace {

double tidy(double v) { return std::abs(v) < 1e-12 ? 0.0 : v; }

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-")
    std::cout << text;
  else
    io::write_file(out, text);
}

ProbabilisticAssignment rsd_for(const Instance& inst, bool exact, long long samples, std::uint64_t seed,
                                bool* was_exact = nullptr) {
  const bool use_exact = exact || rsd_exact_orderings(inst) <= kDefaultRsdOrderingLimit;
  if (was_exact) *was_exact = use_exact;
  return use_exact ? rsd_exact(inst).assignment : rsd_sampled(inst, samples, seed).assignment;
}

std::string describe(const Instance& inst, const Matching& m) {
  std::string s;
  for (int i = 0; i < inst.num_agents(); ++i) {
    if (i) s += ' ';
    s += inst.agent_id(i) + ":" + (m.assigned(i) ? inst.object_id(m.object_of(i)) : "-");
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maximin: worst-case cardinality decompositions of random assignments"};
  app.require_subcommand(1);

  std::string instance_file, out, assignment_file, matching_file, params_file, config_file, mode = "md",
                                                                                              framework = "rmp",
                                                                                              measure = "cardinality",
                                                                                              kind = "lb";
  std::uint64_t seed = 1;
  long long samples = colgen::kDefaultInitialSamples;
  double time_limit = 3600.0, tolerance = colgen::kDefaultTolerance;
  int count = 1, workers = 1, size = 2;
  bool exact = false;
  std::vector<std::string> order;

  auto* generate = app.add_subcommand("generate", "generate random instances");
  generate->add_option("--params", params_file, "generator parameters (JSON)")->check(CLI::ExistingFile);
  generate->add_option("--count", count, "number of instances")->check(CLI::PositiveNumber);
  generate->add_option("--seed", seed, "seed of the first instance; the rest count up");
  generate->add_option("--out", out, "output directory")->required();

  auto* sd = app.add_subcommand("sd", "serial dictatorship for one ordering");
  sd->add_option("--instance", instance_file)->required()->check(CLI::ExistingFile);
  sd->add_option("--order", order, "agent ids in picking order (default: a random order from --seed)")->delimiter(',');
  sd->add_option("--seed", seed);
  sd->add_option("--out", out);

  auto* rsd = app.add_subcommand("rsd", "random serial dictatorship assignment");
  rsd->add_option("--instance", instance_file)->required()->check(CLI::ExistingFile);
  rsd->add_flag("--exact", exact, "average over all orderings");
  rsd->add_option("--samples", samples, "sampled orderings")->check(CLI::PositiveNumber);
  rsd->add_option("--seed", seed);
  rsd->add_option("--out", out);

  auto* ps = app.add_subcommand("ps", "probabilistic serial assignment");
  ps->add_option("--instance", instance_file)->required()->check(CLI::ExistingFile);
  ps->add_option("--out", out);

  auto* decompose = app.add_subcommand("decompose", "decompose an assignment into matchings of near-equal size");
  decompose->add_option("--instance", instance_file)->required()->check(CLI::ExistingFile);
  decompose->add_option("--assignment", assignment_file)->required()->check(CLI::ExistingFile);
  decompose->add_option("--mode", mode)->check(CLI::IsMember({"md", "robust"}));
  decompose->add_option("--out", out);

  auto* solve = app.add_subcommand("solve-mdsd", "best worst case over Pareto-efficient decompositions");
  solve->add_option("--instance", instance_file)->required()->check(CLI::ExistingFile);
  solve->add_option("--assignment", assignment_file, "assignment to decompose (default: RSD of the instance)")
      ->check(CLI::ExistingFile);
  solve->add_option("--framework", framework)->check(CLI::IsMember({"rmp", "alpha"}));
  solve->add_option("--measure", measure)->check(CLI::IsMember({"cardinality", "margin"}));
  solve->add_option("--samples", samples, "RSD samples, also SD samples for the initial columns")
      ->check(CLI::PositiveNumber);
  solve->add_option("--seed", seed);
  solve->add_option("--time-limit", time_limit, "seconds")->check(CLI::PositiveNumber);
  solve->add_option("--tolerance", tolerance)->check(CLI::PositiveNumber);
  solve->add_option("--out", out, "decomposition file");

  auto* unpop = app.add_subcommand("unpopularity", "unpopularity margin of a matching");
  unpop->add_option("--instance", instance_file)->required()->check(CLI::ExistingFile);
  unpop->add_option("--matching", matching_file)->required()->check(CLI::ExistingFile);

  auto* bounds = app.add_subcommand("bounds", "p-, p+, mu of RSD and the interval for z");
  bounds->add_option("--instance", instance_file)->required()->check(CLI::ExistingFile);
  bounds->add_option("--samples", samples)->check(CLI::PositiveNumber);
  bounds->add_option("--seed", seed);
  bounds->add_option("--time-limit", time_limit)->check(CLI::PositiveNumber);

  auto* exp = app.add_subcommand("experiment", "batch runs over generated instances");
  exp->add_option("--config", config_file)->required()->check(CLI::ExistingFile);
  exp->add_option("--workers", workers, "parallel instances (overrides the config)")->check(CLI::PositiveNumber);
  exp->add_option("--out", out, "report directory");

  auto* family = app.add_subcommand("family", "worst-case instance families");
  family->add_option("--kind", kind)->check(CLI::IsMember({"lb", "ub"}));
  family->add_option("--size", size, "k for lb, l for ub")->check(CLI::Range(2, 1000));
  family->add_option("--out", out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) {
      datagen::GenParams p;
      if (!params_file.empty()) p = io::params_from_json(io::read_file(params_file), params_file);
      for (int t = 0; t < count; ++t) {
        p.seed = seed + t;
        const Instance inst = datagen::generate(p);
        const auto path = std::filesystem::path(out) / ("instance_" + std::to_string(p.seed) + ".json");
        io::write_file(path, io::instance_to_json(inst));
        std::cout << path.string() << "\n";
      }
      return 0;
    }

    if (*family) {
      emit(out, io::instance_to_json(kind == "lb" ? datagen::family_lb(size) : datagen::family_ub(size)));
      return 0;
    }

    if (*exp) {
      auto config = experiment::config_from_json(io::read_file(config_file), config_file);
      if (exp->count("--workers")) config.workers = workers;
      const auto report = experiment::run_experiment(config);
      if (!out.empty()) experiment::write_report(report, out);
      std::cout << experiment::render_table(report);
      return report.all_completed() ? 0 : 2;
    }

    const Instance inst = io::load_instance(instance_file);

    if (*sd) {
      std::vector<int> perm;
      if (sd->count("--order")) {
        for (const auto& id : order) {
          const auto a = inst.find_agent(id);
          if (!a) throw std::invalid_argument("unknown agent \"" + id + "\" in --order");
          perm.push_back(*a);
        }
      } else {
        for (int i = 0; i < inst.num_agents(); ++i) perm.push_back(i);
        Rng rng(seed);
        shuffle_in_place(rng, perm);
      }
      emit(out, io::matching_to_json(inst, serial_dictatorship(inst, perm)));
      return 0;
    }

    if (*rsd) {
      const auto est = exact ? rsd_exact(inst) : rsd_sampled(inst, samples, seed);
      emit(out, io::assignment_to_json(inst, est.assignment));
      return 0;
    }

    if (*ps) {
      emit(out, io::assignment_to_json(inst, probabilistic_serial(inst)));
      return 0;
    }

    if (*decompose) {
      const auto x = io::assignment_from_json(inst, io::read_file(assignment_file), assignment_file);
      Decomposition d;
      if (mode == "md") {
        d = decompose_md(inst, x);
      } else {
        const auto r = decompose_robust(inst, x);
        if (!r.ok()) {
          std::cerr << "not robustly ex-post efficient: " << describe(inst, *r.offending) << "\n";
          return 3;
        }
        d = r.decomposition;
      }
      emit(out, io::decomposition_to_json(inst, d));
      std::cerr << d.terms.size() << " matchings, worst case " << worst_case_cardinality(d) << "\n";
      return 0;
    }

    if (*unpop) {
      const auto m = io::matching_from_json(inst, io::read_file(matching_file), matching_file);
      std::cout << "unpopularity margin: " << unpopularity_margin(inst, m) << "\n";
      return 0;
    }

    if (*bounds) {
      lp::SolverOptions mip;
      mip.deadline = colgen::Budget::seconds(time_limit).deadline;
      const int lo = extreme_pe_cardinality(inst, Extreme::Min, mip);
      const int hi = extreme_pe_cardinality(inst, Extreme::Max, mip);
      bool was_exact = false;
      const auto x = rsd_for(inst, false, samples, seed, &was_exact);
      const Rational m = mu(x);
      const long long fm = floor_int(m);
      std::cout << "p-: " << lo << "\np+: " << hi << "\nmu(RSD): " << to_string(m) << " (" << to_double(m) << ", "
                << (was_exact ? "exact" : "sampled " + std::to_string(samples)) << ")\nfloor mu: " << fm << "\n";
      std::cout << "interval: " << fm / 2.0 << " < z < " << 2 * lo << "\n";
      return 0;
    }

    if (*solve) {
      bool rsd_input = assignment_file.empty(), was_exact = false;
      const auto x = rsd_input ? rsd_for(inst, false, samples, seed, &was_exact)
                               : io::assignment_from_json(inst, io::read_file(assignment_file), assignment_file);
      const auto budget = colgen::Budget::seconds(time_limit);
      if (measure == "margin") {
        MarginSearchOptions o;
        o.tolerance = tolerance;
        o.initial_samples = samples;
        o.seed = seed;
        o.budget = budget;
        const auto r = binary_search_margin(inst, x, o);
        std::cout << "status: " << colgen::to_string(r.status) << "\nmargin: " << r.omega
                  << "\nmargin lower bound: " << r.omega_lower << "\n";
        for (const auto& t : r.trace)
          std::cout << "  omega " << t.omega << ": " << (t.feasible ? "feasible" : t.decided ? "infeasible" : "undecided")
                    << " objective " << tidy(t.objective) << " iterations " << t.iterations << " columns "
                    << t.columns_added << "\n";
        std::cout << "columns: " << r.pool_size << "\nseconds: " << r.seconds << "\n";
        if (!out.empty() && !r.decomposition.terms.empty())
          io::write_file(out, io::decomposition_to_json(inst, r.decomposition));
        return 0;
      }
      colgen::SearchOptions o;
      o.framework = framework == "alpha" ? colgen::Framework::Alpha : colgen::Framework::Rmp;
      o.tolerance = tolerance;
      o.initial_samples = samples;
      o.seed = seed;
      o.budget = budget;
      if (rsd_input) {
        lp::SolverOptions mip;
        mip.deadline = budget.deadline;
        o.certified_lower_bound = extreme_pe_cardinality(inst, Extreme::Min, mip);
      }
      const auto r = colgen::binary_search_z(inst, x, o);
      std::cout << "status: " << colgen::to_string(r.status) << "\nfloor mu: " << r.upper_bound << "\nz: " << r.z
                << "\nz upper: " << r.z_upper << "\n";
      if (o.certified_lower_bound) std::cout << "p-: " << *o.certified_lower_bound << "\n";
      for (const auto& t : r.trace)
        std::cout << "  k " << t.k << ": " << (t.feasible ? "feasible" : t.decided ? "infeasible" : "undecided")
                  << " objective " << tidy(t.objective) << " iterations " << t.iterations << " columns " << t.columns_added
                  << "\n";
      std::cout << "columns generated: " << r.columns_generated << "\npool: " << r.pool_size << "\nseconds: " << r.seconds
                << "\n";
      if (!out.empty() && !r.decomposition.terms.empty())
        io::write_file(out, io::decomposition_to_json(inst, r.decomposition));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
