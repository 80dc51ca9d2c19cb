#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "maximin/core.hpp"
#include "maximin/datagen.hpp"

namespace maximin::io {

// Parse or format problems; messages carry "source:line:column" when known.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Instance:   {"objects": [{"id": "a", "capacity": 2}, ...],
//              "agents":  [{"id": "1", "prefs": ["a", "b"]}, ...]}
// Assignment: {"agents": [...ids], "objects": [...ids], "matrix": [["1/2", "0"], ...]}
// Matching:   {"assignment": {"1": "a", "2": null}}
// Decomposition: {"terms": [{"weight": "1/3", "assignment": {...}}, ...]}
// Generator params: the GenParams field names, all optional.

std::string instance_to_json(const Instance& instance);
Instance instance_from_json(const std::string& text, const std::string& source = "<string>");

std::string assignment_to_json(const Instance& instance, const ProbabilisticAssignment& x);
ProbabilisticAssignment assignment_from_json(const Instance& instance, const std::string& text,
                                             const std::string& source = "<string>");

std::string matching_to_json(const Instance& instance, const Matching& matching);
Matching matching_from_json(const Instance& instance, const std::string& text, const std::string& source = "<string>");

std::string decomposition_to_json(const Instance& instance, const Decomposition& decomposition);
Decomposition decomposition_from_json(const Instance& instance, const std::string& text,
                                      const std::string& source = "<string>");

std::string params_to_json(const datagen::GenParams& params);
datagen::GenParams params_from_json(const std::string& text, const std::string& source = "<string>");

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

Instance load_instance(const std::filesystem::path& path);

}  // namespace maximin::io
