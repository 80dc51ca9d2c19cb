#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "maximin/core.hpp"

namespace maximin::datagen {

struct GenParams {
  int n_agents = 100;
  double ratio = 10.0;  // |N| / |O|
  double C = 1.20;      // total capacity / |N|
  double l_mean = 2.42;
  double l_sd = 1.05;
  double xi = 0.10;     // fraction of popular objects
  double rho = 0.21;    // correlation of capacity and popularity
  double cv_c = 0.80;
  double cv_eta = 0.60;
  double delta1 = 0.14;
  double delta2 = 0.01;
  std::uint64_t seed = 1;

  int num_objects() const;
  // Every violated range, empty when valid.
  std::vector<std::string> violations() const;
};

// Per-object quantities drawn while generating, exposed for diagnostics.
struct GeneratedObjects {
  std::vector<int> capacity;
  std::vector<double> popularity;  // target eta_j after rescaling and rounding
  std::vector<char> popular;
};

struct Generated {
  Instance instance;
  GeneratedObjects objects;
  std::vector<int> lengths;
};

// Throws std::invalid_argument listing every violation.
Generated generate_detailed(const GenParams& params);
Instance generate(const GenParams& params);

// k^2 agents, k+1 objects with q = (k, 1, ..., 1); the first k agents list
// every object in order, the rest only o1.
Instance family_lb(int k);

// l^2 agents, two objects with q = (l, l); the first l agents list (o1, o2),
// the rest only o1.
Instance family_ub(int l);

// Location of the normal whose draws, truncated to [0.5, max_len + 0.5) and
// rounded, average `target`.
double calibrated_length_location(double target, double sd, int max_len);

}  // namespace maximin::datagen
