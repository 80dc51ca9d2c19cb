#include "maximin/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "maximin/io.hpp"
#include "maximin/mechanisms.hpp"
#include "maximin/pe_model.hpp"

namespace maximin::experiment {

using nlohmann::json;

namespace {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

colgen::Framework framework_from(const std::string& name, const std::string& source) {
  if (name == "rmp") return colgen::Framework::Rmp;
  if (name == "alpha") return colgen::Framework::Alpha;
  throw io::IoError(source + ": unknown framework \"" + name + "\" (expected rmp or alpha)");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string instance_id(const GridCell& cell, std::uint64_t seed) {
  return "n" + std::to_string(cell.n_agents) + "_r" + format_number(cell.ratio) + "_s" + std::to_string(seed);
}

ExperimentConfig config_from_json(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw io::IoError(source + ": " + e.what());
  }
  if (!doc.is_object()) throw io::IoError(source + ": experiment config must be a JSON object");
  ExperimentConfig c;
  try {
    if (doc.contains("params")) c.params = io::params_from_json(doc["params"].dump(), source + " (params)");
    if (doc.contains("grid"))
      for (const auto& g : doc.at("grid"))
        c.grid.push_back({g.value("n_agents", c.params.n_agents), g.value("ratio", c.params.ratio)});
    if (doc.contains("seeds")) {
      for (const auto& s : doc.at("seeds")) c.seeds.push_back(s.get<std::uint64_t>());
    } else if (doc.contains("count")) {
      const std::uint64_t first = doc.value("seed", std::uint64_t(1));
      const int count = doc.at("count").get<int>();
      for (int t = 0; t < count; ++t) c.seeds.push_back(first + t);
    }
    if (doc.contains("framework")) c.framework = framework_from(doc.at("framework").get<std::string>(), source);
    c.samples = doc.value("samples", c.samples);
    c.time_limit = doc.value("time_limit", c.time_limit);
    c.tolerance = doc.value("tolerance", c.tolerance);
    c.workers = doc.value("workers", c.workers);
  } catch (const json::exception& e) {
    throw io::IoError(source + ": " + e.what());
  }
  if (c.samples < 1) throw io::IoError(source + ": samples must be positive");
  if (c.time_limit <= 0) throw io::IoError(source + ": time_limit must be positive");
  if (c.workers < 1) throw io::IoError(source + ": workers must be at least 1");
  return c;
}

RunRow run_instance(const ExperimentConfig& config, const GridCell& cell, std::uint64_t seed) {
  const auto started = std::chrono::steady_clock::now();
  RunRow row;
  row.id = instance_id(cell, seed);
  row.seed = seed;
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count(); };
  try {
    datagen::GenParams p = config.params;
    p.n_agents = cell.n_agents;
    p.ratio = cell.ratio;
    p.seed = seed;
    row.instance = datagen::generate(p);
    row.agents = row.instance.num_agents();
    row.objects = row.instance.num_objects();
    const colgen::Budget budget = colgen::Budget::seconds(config.time_limit);

    const auto x = rsd_sampled(row.instance, config.samples, seed).assignment;
    row.floor_mu = static_cast<int>(floor_int(mu(x)));
    row.z_upper = row.floor_mu;

    lp::SolverOptions mip;
    mip.deadline = budget.deadline;
    try {
      row.p_minus = extreme_pe_cardinality(row.instance, Extreme::Min, mip);
    } catch (const std::runtime_error&) {
      if (!budget.expired()) throw;
    }

    colgen::SearchOptions search;
    search.framework = config.framework;
    search.tolerance = config.tolerance;
    search.seed = seed;
    search.budget = budget;
    // x averages serial-dictatorship outcomes, each assigning at least p- agents
    search.certified_lower_bound = row.p_minus;
    const auto r = colgen::binary_search_z(row.instance, x, search);
    row.z = r.z;
    row.z_upper = r.z_upper;
    for (const auto& t : r.trace) row.iterations += t.iterations;
    row.columns = r.columns_generated;
    row.decomposition = r.decomposition;
    switch (r.status) {
      case colgen::MdsdStatus::Optimal: row.status = "optimal"; break;
      case colgen::MdsdStatus::BudgetExhausted: row.status = "budget_exhausted"; break;
      case colgen::MdsdStatus::NotDecomposable: row.status = "not_decomposable"; break;
    }
    if (!row.p_minus) row.status = "budget_exhausted";
  } catch (const std::exception& e) {
    row.status = "error";
    row.error = e.what();
  }
  row.seconds = elapsed();
  return row;
}

bool RunReport::all_completed() const {
  for (const auto& r : rows)
    if (!r.completed()) return false;
  return true;
}

RunReport run_experiment(const ExperimentConfig& config) {
  std::vector<std::pair<GridCell, std::uint64_t>> jobs;
  for (const auto& cell : config.grid)
    for (auto seed : config.seeds) jobs.push_back({cell, seed});
  RunReport report;
  report.rows.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < jobs.size();)
      report.rows[t] = run_instance(config, jobs[t].first, jobs[t].second);
  };
  const int threads = std::max(1, std::min<int>(config.workers, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < threads; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  Summary& s = report.summary;
  s.rows = static_cast<int>(report.rows.size());
  double gain = 0.0, seconds = 0.0;
  for (const auto& r : report.rows) {
    seconds += r.seconds;
    if (r.status != "optimal") continue;
    ++s.optimal;
    if (r.z == r.floor_mu) ++s.at_upper_bound;
    if (r.p_minus && r.z > *r.p_minus) ++s.above_lower_bound;
    if (r.p_minus && *r.p_minus > 0) gain += 100.0 * (r.z - *r.p_minus) / *r.p_minus;
  }
  if (s.optimal > 0) s.mean_gain = gain / s.optimal;
  if (s.rows > 0) s.mean_seconds = seconds / s.rows;
  return report;
}

std::string report_csv(const RunReport& report) {
  std::ostringstream out;
  out << "id,seed,agents,objects,p_minus,floor_mu,z,z_upper,status,iterations,columns,error\n";
  for (const auto& r : report.rows) {
    out << r.id << ',' << r.seed << ',' << r.agents << ',' << r.objects << ','
        << (r.p_minus ? std::to_string(*r.p_minus) : "") << ',' << r.floor_mu << ',' << r.z << ',' << r.z_upper << ','
        << r.status << ',' << r.iterations << ',' << r.columns << ',' << csv_field(r.error) << '\n';
  }
  return out.str();
}

std::string timing_csv(const RunReport& report) {
  std::ostringstream out;
  out << "id,seconds\n";
  for (const auto& r : report.rows) out << r.id << ',' << fixed(r.seconds, 3) << '\n';
  return out.str();
}

std::string render_table(const RunReport& report) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-18s %5s %5s %5s %8s %9s %-16s %9s %6s %6s\n", "instance", "|N|", "|O|", "p-",
                "floor mu", "z", "status", "time (s)", "iters", "cols");
  out << line;
  for (const auto& r : report.rows) {
    const std::string z = r.status == "optimal" || r.z == r.z_upper
                              ? std::to_string(r.z)
                              : "[" + std::to_string(r.z) + "," + std::to_string(r.z_upper) + "]";
    std::snprintf(line, sizeof line, "%-18s %5d %5d %5s %8d %9s %-16s %9.2f %6lld %6lld\n", r.id.c_str(), r.agents,
                  r.objects, r.p_minus ? std::to_string(*r.p_minus).c_str() : "-", r.floor_mu, z.c_str(),
                  r.status.c_str(), r.seconds, r.iterations, r.columns);
    out << line;
    if (!r.error.empty()) out << "  error: " << r.error << '\n';
  }
  const Summary& s = report.summary;
  out << "\n" << s.optimal << " of " << s.rows << " solved to optimality; z = floor mu on " << s.at_upper_bound
      << ", z > p- on " << s.above_lower_bound << "; mean gain over p- " << fixed(s.mean_gain, 2)
      << "%; mean time " << fixed(s.mean_seconds, 2) << " s\n";
  return out.str();
}

void write_report(const RunReport& report, const std::filesystem::path& dir) {
  io::write_file(dir / "report.csv", report_csv(report));
  io::write_file(dir / "timing.csv", timing_csv(report));
  io::write_file(dir / "table.txt", render_table(report));
  for (const auto& r : report.rows)
    if (!r.decomposition.terms.empty())
      io::write_file(dir / "decompositions" / (r.id + ".json"), io::decomposition_to_json(r.instance, r.decomposition));
}

}  // namespace maximin::experiment
