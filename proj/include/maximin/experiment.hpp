#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "maximin/colgen.hpp"
#include "maximin/datagen.hpp"

namespace maximin::experiment {

struct GridCell {
  int n_agents = 50;
  double ratio = 10.0;
};

struct ExperimentConfig {
  datagen::GenParams params;  // base values; n_agents, ratio and seed are overridden per row
  std::vector<GridCell> grid;
  std::vector<std::uint64_t> seeds;
  colgen::Framework framework = colgen::Framework::Rmp;
  long long samples = 10'000;  // sampled RSD draws
  double time_limit = 3600.0;  // seconds per instance
  double tolerance = colgen::kDefaultTolerance;
  int workers = 1;
};

// {"params": {...}, "grid": [{"n_agents": 50, "ratio": 10}],
//  "seeds": [1, 2, 3] | "seed": 1, "count": 25,
//  "framework": "rmp", "samples": 10000, "time_limit": 3600,
//  "tolerance": 1e-4, "workers": 4}
ExperimentConfig config_from_json(const std::string& text, const std::string& source = "<string>");

struct RunRow {
  std::string id;
  std::uint64_t seed = 0;
  int agents = 0;
  int objects = 0;
  std::optional<int> p_minus;
  int floor_mu = 0;
  int z = 0;        // best certified
  int z_upper = 0;  // z is known to lie in [z, z_upper]
  std::string status;  // optimal | budget_exhausted | not_decomposable | error
  double seconds = 0.0;
  long long iterations = 0;
  long long columns = 0;
  std::string error;
  Instance instance;
  Decomposition decomposition;

  bool completed() const { return status == "optimal" || status == "budget_exhausted"; }
};

struct Summary {
  int rows = 0;
  int optimal = 0;
  int at_upper_bound = 0;     // optimal with z = floor(mu)
  int above_lower_bound = 0;  // optimal with z > p-
  double mean_gain = 0.0;     // mean (z - p-) / p- over optimal rows, in percent
  double mean_seconds = 0.0;
};

struct RunReport {
  std::vector<RunRow> rows;  // in grid order, then seed order
  Summary summary;
  bool all_completed() const;
};

RunRow run_instance(const ExperimentConfig& config, const GridCell& cell, std::uint64_t seed);
RunReport run_experiment(const ExperimentConfig& config);

// Machine-readable rows; timings go to a separate file so that the report
// itself is byte-identical across reruns.
std::string report_csv(const RunReport& report);
std::string timing_csv(const RunReport& report);
std::string render_table(const RunReport& report);

// report.csv, timing.csv, table.txt and decompositions/<id>.json
void write_report(const RunReport& report, const std::filesystem::path& dir);

std::string instance_id(const GridCell& cell, std::uint64_t seed);

}  // namespace maximin::experiment
