#include "maximin/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace maximin::io {

using json = nlohmann::ordered_json;

namespace {

std::string position(const std::string& text, std::size_t byte) {
  int line = 1, column = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return std::to_string(line) + ":" + std::to_string(column);
}

json parse(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError(source + ":" + position(text, e.byte > 0 ? e.byte - 1 : 0) + ": " + e.what());
  }
}

[[noreturn]] void fail(const std::string& source, const std::string& what) { throw IoError(source + ": " + what); }

const json& field(const json& obj, const char* key, const std::string& source, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) fail(source, where + ": missing \"" + key + "\"");
  return obj.at(key);
}

std::string as_string(const json& v, const std::string& source, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  fail(source, where + ": expected a string");
}

Rational as_rational(const json& v, const std::string& source, const std::string& where) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return to_rational(v.get<long long>());
  } catch (const std::exception& e) {
    fail(source, where + ": " + e.what());
  }
  fail(source, where + ": expected an exact number such as \"5/12\"");
}

json matching_object(const Instance& instance, const Matching& matching) {
  json out = json::object();
  for (int i = 0; i < instance.num_agents(); ++i) {
    const int j = matching.object_of(i);
    out[instance.agent_id(i)] = j == kOutside ? json(nullptr) : json(instance.object_id(j));
  }
  return out;
}

Matching matching_from(const Instance& instance, const json& obj, const std::string& source, const std::string& where) {
  if (!obj.is_object()) fail(source, where + ": expected an object mapping agent ids to object ids");
  std::vector<int> assignment(instance.num_agents(), kOutside);
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const auto agent = instance.find_agent(it.key());
    if (!agent) fail(source, where + ": unknown agent \"" + it.key() + "\"");
    if (it.value().is_null()) continue;
    const std::string id = as_string(it.value(), source, where + "." + it.key());
    const auto object = instance.find_object(id);
    if (!object) fail(source, where + ": unknown object \"" + id + "\"");
    assignment[*agent] = *object;
  }
  return Matching(std::move(assignment));
}

}  // namespace

std::string instance_to_json(const Instance& instance) {
  json out;
  out["objects"] = json::array();
  for (int j = 0; j < instance.num_objects(); ++j)
    out["objects"].push_back({{"id", instance.object_id(j)}, {"capacity", instance.capacity(j)}});
  out["agents"] = json::array();
  for (int i = 0; i < instance.num_agents(); ++i) {
    json prefs = json::array();
    for (int j : instance.prefs(i)) prefs.push_back(instance.object_id(j));
    out["agents"].push_back({{"id", instance.agent_id(i)}, {"prefs", prefs}});
  }
  return out.dump(2) + "\n";
}

Instance instance_from_json(const std::string& text, const std::string& source) {
  const json doc = parse(text, source);
  RawInstance raw;
  const json& objects = field(doc, "objects", source, "instance");
  const json& agents = field(doc, "agents", source, "instance");
  if (!objects.is_array() || !agents.is_array()) fail(source, "\"objects\" and \"agents\" must be arrays");
  for (std::size_t k = 0; k < objects.size(); ++k) {
    const std::string where = "objects[" + std::to_string(k) + "]";
    const json& cap = field(objects[k], "capacity", source, where);
    if (!cap.is_number_integer()) fail(source, where + ": capacity must be an integer");
    raw.objects.push_back({as_string(field(objects[k], "id", source, where), source, where), cap.get<long long>()});
  }
  for (std::size_t k = 0; k < agents.size(); ++k) {
    const std::string where = "agents[" + std::to_string(k) + "]";
    AgentSpec a{as_string(field(agents[k], "id", source, where), source, where), {}};
    const json& prefs = field(agents[k], "prefs", source, where);
    if (!prefs.is_array()) fail(source, where + ": prefs must be an array");
    for (const auto& p : prefs) a.prefs.push_back(as_string(p, source, where));
    raw.agents.push_back(std::move(a));
  }
  try {
    return validate_instance(raw);
  } catch (const InstanceError& e) {
    std::string msg;
    for (const auto& v : e.violations()) msg += "\n  " + v;
    fail(source, "invalid instance:" + msg);
  }
}

std::string assignment_to_json(const Instance& instance, const ProbabilisticAssignment& x) {
  json out;
  out["agents"] = json::array();
  out["objects"] = json::array();
  for (int i = 0; i < instance.num_agents(); ++i) out["agents"].push_back(instance.agent_id(i));
  for (int j = 0; j < instance.num_objects(); ++j) out["objects"].push_back(instance.object_id(j));
  out["matrix"] = json::array();
  for (int i = 0; i < x.num_agents(); ++i) {
    json row = json::array();
    for (int j = 0; j < x.num_objects(); ++j) row.push_back(to_string(x.at(i, j)));
    out["matrix"].push_back(row);
  }
  return out.dump(1) + "\n";
}

ProbabilisticAssignment assignment_from_json(const Instance& instance, const std::string& text,
                                             const std::string& source) {
  const json doc = parse(text, source);
  const json& agents = field(doc, "agents", source, "assignment");
  const json& objects = field(doc, "objects", source, "assignment");
  const json& matrix = field(doc, "matrix", source, "assignment");
  if (!agents.is_array() || !objects.is_array() || !matrix.is_array())
    fail(source, "\"agents\", \"objects\" and \"matrix\" must be arrays");
  std::vector<int> row_of, col_of;
  for (const auto& a : agents) {
    const std::string id = as_string(a, source, "agents");
    const auto idx = instance.find_agent(id);
    if (!idx) fail(source, "unknown agent \"" + id + "\"");
    row_of.push_back(*idx);
  }
  for (const auto& o : objects) {
    const std::string id = as_string(o, source, "objects");
    const auto idx = instance.find_object(id);
    if (!idx) fail(source, "unknown object \"" + id + "\"");
    col_of.push_back(*idx);
  }
  if (matrix.size() != row_of.size()) fail(source, "matrix has " + std::to_string(matrix.size()) + " rows, expected " + std::to_string(row_of.size()));
  ProbabilisticAssignment x(instance.num_agents(), instance.num_objects());
  for (std::size_t r = 0; r < matrix.size(); ++r) {
    if (!matrix[r].is_array() || matrix[r].size() != col_of.size())
      fail(source, "matrix row " + std::to_string(r) + " has the wrong length");
    for (std::size_t c = 0; c < col_of.size(); ++c)
      x.at(row_of[r], col_of[c]) = as_rational(matrix[r][c], source, "matrix[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  }
  return x;
}

std::string matching_to_json(const Instance& instance, const Matching& matching) {
  json out;
  out["assignment"] = matching_object(instance, matching);
  return out.dump(2) + "\n";
}

Matching matching_from_json(const Instance& instance, const std::string& text, const std::string& source) {
  const json doc = parse(text, source);
  return matching_from(instance, field(doc, "assignment", source, "matching"), source, "assignment");
}

std::string decomposition_to_json(const Instance& instance, const Decomposition& decomposition) {
  json out;
  out["terms"] = json::array();
  for (const auto& t : decomposition.terms)
    out["terms"].push_back({{"weight", to_string(t.weight)},
                            {"cardinality", t.matching.cardinality()},
                            {"assignment", matching_object(instance, t.matching)}});
  return out.dump(2) + "\n";
}

Decomposition decomposition_from_json(const Instance& instance, const std::string& text, const std::string& source) {
  const json doc = parse(text, source);
  const json& terms = field(doc, "terms", source, "decomposition");
  if (!terms.is_array()) fail(source, "\"terms\" must be an array");
  Decomposition d{instance.num_agents(), instance.num_objects(), {}};
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const std::string where = "terms[" + std::to_string(k) + "]";
    d.terms.push_back({as_rational(field(terms[k], "weight", source, where), source, where),
                       matching_from(instance, field(terms[k], "assignment", source, where), source, where)});
  }
  return d;
}

std::string params_to_json(const datagen::GenParams& p) {
  json out = {{"n_agents", p.n_agents}, {"ratio", p.ratio}, {"C", p.C},           {"l_mean", p.l_mean},
              {"l_sd", p.l_sd},         {"xi", p.xi},       {"rho", p.rho},       {"cv_c", p.cv_c},
              {"cv_eta", p.cv_eta},     {"delta1", p.delta1}, {"delta2", p.delta2}, {"seed", p.seed}};
  return out.dump(2) + "\n";
}

datagen::GenParams params_from_json(const std::string& text, const std::string& source) {
  const json doc = parse(text, source);
  if (!doc.is_object()) fail(source, "parameters must be a JSON object");
  datagen::GenParams p;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& k = it.key();
    const json& v = it.value();
    auto number = [&]() {
      if (!v.is_number()) fail(source, "\"" + k + "\" must be a number");
      return v.get<double>();
    };
    if (k == "n_agents") {
      if (!v.is_number_integer()) fail(source, "\"n_agents\" must be an integer");
      p.n_agents = v.get<int>();
    } else if (k == "seed") {
      if (!v.is_number_unsigned()) fail(source, "\"seed\" must be a nonnegative integer");
      p.seed = v.get<std::uint64_t>();
    } else if (k == "ratio") p.ratio = number();
    else if (k == "C") p.C = number();
    else if (k == "l_mean") p.l_mean = number();
    else if (k == "l_sd") p.l_sd = number();
    else if (k == "xi") p.xi = number();
    else if (k == "rho") p.rho = number();
    else if (k == "cv_c") p.cv_c = number();
    else if (k == "cv_eta") p.cv_eta = number();
    else if (k == "delta1") p.delta1 = number();
    else if (k == "delta2") p.delta2 = number();
    else fail(source, "unknown parameter \"" + k + "\"");
  }
  return p;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out << text;
  if (!out) throw IoError(path.string() + ": write failed");
}

Instance load_instance(const std::filesystem::path& path) { return instance_from_json(read_file(path), path.string()); }

}  // namespace maximin::io
