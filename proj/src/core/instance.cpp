#include <map>
#include <set>
#include <sstream>

#include "maximin/core.hpp"

namespace maximin {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += "; ";
    out += s;
  }
  return out;
}

}  // namespace

InstanceError::InstanceError(std::vector<std::string> violations)
    : std::invalid_argument("invalid instance: " + join(violations)), violations_(std::move(violations)) {}

int Instance::rank(int agent, int object) const {
  if (agent < 0 || agent >= num_agents()) throw std::out_of_range("agent index out of range");
  if (object == kOutside) return static_cast<int>(prefs_[agent].size());
  if (object < 0 || object >= num_objects()) throw std::out_of_range("object index out of range");
  return rank_[std::size_t(agent) * num_objects() + object];
}

bool Instance::prefers(int agent, int a, int b) const {
  const int unacceptable = num_objects() + 1;
  auto key = [&](int o) {
    const int r = rank(agent, o);
    return r < 0 ? unacceptable : r;
  };
  return key(a) < key(b);
}

std::optional<int> Instance::find_agent(std::string_view id) const {
  for (int i = 0; i < num_agents(); ++i)
    if (agent_ids_[i] == id) return i;
  return std::nullopt;
}

std::optional<int> Instance::find_object(std::string_view id) const {
  for (int j = 0; j < num_objects(); ++j)
    if (object_ids_[j] == id) return j;
  return std::nullopt;
}

RawInstance Instance::raw() const {
  RawInstance r;
  for (int j = 0; j < num_objects(); ++j) r.objects.push_back({object_ids_[j], capacities_[j]});
  for (int i = 0; i < num_agents(); ++i) {
    AgentSpec a{agent_ids_[i], {}};
    for (int j : prefs_[i]) a.prefs.push_back(object_ids_[j]);
    r.agents.push_back(std::move(a));
  }
  return r;
}

Instance validate_instance(const RawInstance& raw) {
  std::vector<std::string> errors;
  std::map<std::string, int> object_index;
  for (std::size_t j = 0; j < raw.objects.size(); ++j) {
    const auto& o = raw.objects[j];
    if (o.id.empty()) errors.push_back("object #" + std::to_string(j) + " has an empty id");
    if (!object_index.emplace(o.id, static_cast<int>(j)).second) errors.push_back("duplicate object id '" + o.id + "'");
    if (o.capacity < 1)
      errors.push_back("object '" + o.id + "' has capacity " + std::to_string(o.capacity) + " (must be >= 1)");
    else if (o.capacity > 1'000'000'000)
      errors.push_back("object '" + o.id + "' capacity too large");
  }
  std::set<std::string> agent_ids;
  for (std::size_t i = 0; i < raw.agents.size(); ++i) {
    const auto& a = raw.agents[i];
    if (a.id.empty()) errors.push_back("agent #" + std::to_string(i) + " has an empty id");
    if (!agent_ids.insert(a.id).second) errors.push_back("duplicate agent id '" + a.id + "'");
    std::set<std::string> seen;
    for (const auto& p : a.prefs) {
      if (!object_index.count(p)) errors.push_back("agent '" + a.id + "' lists unknown object '" + p + "'");
      if (!seen.insert(p).second) errors.push_back("agent '" + a.id + "' has duplicate preference '" + p + "'");
    }
  }
  if (!errors.empty()) throw InstanceError(std::move(errors));

  Instance inst;
  const int n = static_cast<int>(raw.agents.size());
  const int m = static_cast<int>(raw.objects.size());
  for (const auto& o : raw.objects) {
    inst.object_ids_.push_back(o.id);
    inst.capacities_.push_back(static_cast<int>(o.capacity));
  }
  inst.rank_.assign(std::size_t(n) * m, -1);
  for (int i = 0; i < n; ++i) {
    inst.agent_ids_.push_back(raw.agents[i].id);
    std::vector<int> prefs;
    for (const auto& p : raw.agents[i].prefs) {
      const int j = object_index.at(p);
      inst.rank_[std::size_t(i) * m + j] = static_cast<int>(prefs.size());
      prefs.push_back(j);
    }
    inst.prefs_.push_back(std::move(prefs));
  }
  return inst;
}

int Matching::cardinality() const {
  int c = 0;
  for (int o : assignment_) c += o != kOutside;
  return c;
}

std::string Matching::key() const {
  std::string out;
  for (std::size_t i = 0; i < assignment_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(assignment_[i]);
  }
  return out;
}

}  // namespace maximin
