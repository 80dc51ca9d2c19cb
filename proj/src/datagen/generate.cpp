#include "maximin/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "maximin/random.hpp"

namespace maximin::datagen {

namespace {

double standard_normal(Rng& rng) {
  // Box-Muller, first variate only so one call consumes a fixed two draws
  double u1;
  do u1 = uniform_unit(rng);
  while (u1 <= 0.0);
  const double u2 = uniform_unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

double mean_rounded_length(double location, double sd, int max_len) {
  double mass = 0.0, total = 0.0;
  for (int k = 1; k <= max_len; ++k) {
    const double p = normal_cdf((k + 0.5 - location) / sd) - normal_cdf((k - 0.5 - location) / sd);
    mass += p;
    total += k * p;
  }
  return mass > 0.0 ? total / mass : location;
}

std::size_t pick_weighted(Rng& rng, const std::vector<double>& weights) {
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  double r = uniform_unit(rng) * sum;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (r < weights[k]) return k;
    r -= weights[k];
  }
  for (std::size_t k = weights.size(); k-- > 0;)
    if (weights[k] > 0.0) return k;
  return 0;
}

RawInstance skeleton(const std::vector<int>& capacities, const std::vector<std::vector<int>>& prefs) {
  RawInstance raw;
  for (std::size_t j = 0; j < capacities.size(); ++j) raw.objects.push_back({"o" + std::to_string(j + 1), capacities[j]});
  for (std::size_t i = 0; i < prefs.size(); ++i) {
    AgentSpec a{"a" + std::to_string(i + 1), {}};
    for (int j : prefs[i]) a.prefs.push_back("o" + std::to_string(j + 1));
    raw.agents.push_back(std::move(a));
  }
  return raw;
}

}  // namespace

int GenParams::num_objects() const { return ratio > 0.0 ? round_half_up(n_agents / ratio) : 0; }

std::vector<std::string> GenParams::violations() const {
  std::vector<std::string> v;
  if (n_agents < 1) v.push_back("n_agents must be >= 1");
  if (!(ratio > 0.0)) v.push_back("ratio must be positive");
  const int m = num_objects();
  if (ratio > 0.0 && m < 1) v.push_back("ratio leaves no objects (round(n_agents / ratio) = 0)");
  if (!(C > 0.0)) v.push_back("C must be positive");
  if (m >= 1 && C * n_agents < m) v.push_back("C * n_agents must be at least the number of objects (capacities >= 1)");
  if (!(l_mean >= 1.0)) v.push_back("l_mean must be >= 1");
  if (m >= 1 && l_mean > m) v.push_back("l_mean exceeds the number of objects");
  if (!(l_sd >= 0.0)) v.push_back("l_sd must be >= 0");
  if (!(xi >= 0.0 && xi <= 1.0)) v.push_back("xi must lie in [0, 1]");
  if (!(rho >= -1.0 && rho <= 1.0)) v.push_back("rho must lie in [-1, 1]");
  if (!(cv_c >= 0.0)) v.push_back("cv_c must be >= 0");
  if (!(cv_eta >= 0.0)) v.push_back("cv_eta must be >= 0");
  if (!std::isfinite(delta1) || std::abs(delta1) > 1.0) v.push_back("delta1 must lie in [-1, 1]");
  if (!std::isfinite(delta2) || std::abs(delta2) > 1.0) v.push_back("delta2 must lie in [-1, 1]");
  return v;
}

double calibrated_length_location(double target, double sd, int max_len) {
  if (sd <= 0.0) return target;
  double lo = -10.0 * sd + 0.5, hi = max_len + 10.0 * sd + 0.5;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mean_rounded_length(mid, sd, max_len) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

Generated generate_detailed(const GenParams& p) {
  const auto bad = p.violations();
  if (!bad.empty()) {
    std::string msg = "invalid generator parameters:";
    for (const auto& b : bad) msg += " " + b + ";";
    throw std::invalid_argument(msg);
  }
  const int n = p.n_agents;
  const int m = p.num_objects();
  Rng rng(p.seed);

  // (i) list lengths
  std::vector<int> lengths(n);
  const double location = calibrated_length_location(p.l_mean, p.l_sd, m);
  for (int i = 0; i < n; ++i) {
    if (p.l_sd <= 0.0) {
      lengths[i] = std::clamp(round_half_up(p.l_mean), 1, m);
      continue;
    }
    double v;
    do v = location + p.l_sd * standard_normal(rng);
    while (v < 0.5 || v >= m + 0.5);
    lengths[i] = std::clamp(round_half_up(v), 1, m);
  }

  // (ii)-(iii) correlated capacities and popularities
  const double q_mean = p.C * n / m;
  const double q_sd = p.cv_c * q_mean;
  const double eta_mean = p.l_mean / p.C;
  const double eta_sd = p.cv_eta * eta_mean;
  const double tail = std::sqrt(std::max(0.0, 1.0 - p.rho * p.rho));
  std::vector<double> q_raw(m), eta_raw(m);
  for (int j = 0; j < m; ++j) {
    while (true) {
      const double z1 = standard_normal(rng);
      const double z2 = standard_normal(rng);
      const double a = z1;
      const double b = p.rho * z1 + tail * z2;
      const double q = q_mean + q_sd * a;
      const double e = eta_mean + eta_sd * b;
      if (q >= 0.5 && e > 0.0) {
        q_raw[j] = q;
        eta_raw[j] = e;
        break;
      }
    }
  }
  const double q_scale = p.C * n / std::accumulate(q_raw.begin(), q_raw.end(), 0.0);
  const double eta_scale = eta_mean * m / std::accumulate(eta_raw.begin(), eta_raw.end(), 0.0);
  GeneratedObjects objects;
  objects.capacity.resize(m);
  objects.popularity.resize(m);
  for (int j = 0; j < m; ++j) {
    objects.capacity[j] = std::max(1, round_half_up(q_raw[j] * q_scale));
    objects.popularity[j] = std::max(1, round_half_up(eta_raw[j] * eta_scale));
  }

  // popular group: the top xi fraction by popularity, ties by index
  std::vector<int> by_popularity(m);
  std::iota(by_popularity.begin(), by_popularity.end(), 0);
  std::stable_sort(by_popularity.begin(), by_popularity.end(),
                   [&](int a, int b) { return objects.popularity[a] > objects.popularity[b]; });
  const int n_popular = p.xi > 0.0 ? std::clamp(round_half_up(p.xi * m), 1, m) : 0;
  objects.popular.assign(m, 0);
  for (int r = 0; r < n_popular; ++r) objects.popular[by_popularity[r]] = 1;

  std::vector<double> attraction(m);
  double popular_mass = 0.0, total_mass = 0.0;
  for (int j = 0; j < m; ++j) {
    attraction[j] = objects.popularity[j] * objects.capacity[j];
    total_mass += attraction[j];
    if (objects.popular[j]) popular_mass += attraction[j];
  }
  const double base = total_mass > 0.0 ? popular_mass / total_mass : 0.0;
  const int longest = *std::max_element(lengths.begin(), lengths.end());
  const double anchor = 0.5 * (longest + 1);

  // (iv) preference lists
  std::vector<std::vector<int>> prefs(n);
  for (int i = 0; i < n; ++i) {
    std::vector<char> used(m, 0);
    bool first_popular = false;
    for (int t = 0; t < lengths[i]; ++t) {
      double pi = base;
      if (anchor > 1.0) pi += p.delta1 * (lengths[i] - 1) / (anchor - 1.0);
      if (t > 0) pi += (first_popular ? 0.5 : -0.5) * p.delta2;
      pi = std::clamp(pi, 0.0, 1.0);
      std::vector<double> pop_w(m, 0.0), unpop_w(m, 0.0);
      double pop_q = 0.0, unpop_q = 0.0;
      for (int j = 0; j < m; ++j) {
        if (used[j]) continue;
        if (objects.popular[j]) {
          pop_w[j] = attraction[j];
          pop_q += attraction[j];
        } else {
          unpop_w[j] = attraction[j];
          unpop_q += attraction[j];
        }
      }
      if (pop_q <= 0.0) pi = 0.0;
      if (unpop_q <= 0.0) pi = 1.0;
      const bool take_popular = uniform_unit(rng) < pi;
      const int j = static_cast<int>(pick_weighted(rng, take_popular ? pop_w : unpop_w));
      used[j] = 1;
      prefs[i].push_back(j);
      if (t == 0) first_popular = objects.popular[j];
    }
  }

  return Generated{validate_instance(skeleton(objects.capacity, prefs)), objects, lengths};
}

Instance generate(const GenParams& params) { return generate_detailed(params).instance; }

Instance family_lb(int k) {
  if (k < 2) throw std::invalid_argument("family_lb needs k >= 2");
  std::vector<int> caps(k + 1, 1);
  caps[0] = k;
  std::vector<int> all(k + 1);
  std::iota(all.begin(), all.end(), 0);
  std::vector<std::vector<int>> prefs;
  for (int i = 0; i < k * k; ++i) prefs.push_back(i < k ? all : std::vector<int>{0});
  return validate_instance(skeleton(caps, prefs));
}

Instance family_ub(int l) {
  if (l < 2) throw std::invalid_argument("family_ub needs l >= 2");
  std::vector<std::vector<int>> prefs;
  for (int i = 0; i < l * l; ++i) prefs.push_back(i < l ? std::vector<int>{0, 1} : std::vector<int>{0});
  return validate_instance(skeleton({l, l}, prefs));
}

}  // namespace maximin::datagen
