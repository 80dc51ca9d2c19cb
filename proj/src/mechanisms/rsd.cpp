#include <algorithm>
#include <climits>
#include <map>
#include <thread>

#include "maximin/mechanisms.hpp"
#include "maximin/random.hpp"

namespace maximin {

namespace {

struct TypePartition {
  std::vector<int> type_of;               // agent -> type
  std::vector<std::vector<int>> members;  // type -> agents, ascending
};

TypePartition partition_by_preferences(const Instance& instance) {
  TypePartition p;
  std::map<std::vector<int>, int> ids;
  for (int i = 0; i < instance.num_agents(); ++i) {
    auto [it, fresh] = ids.emplace(instance.prefs(i), static_cast<int>(p.members.size()));
    if (fresh) p.members.emplace_back();
    p.members[it->second].push_back(i);
    p.type_of.push_back(it->second);
  }
  return p;
}

}  // namespace

long long rsd_exact_orderings(const Instance& instance) {
  const auto p = partition_by_preferences(instance);
  mpz_class total;
  mpz_fac_ui(total.get_mpz_t(), instance.num_agents());
  for (const auto& m : p.members) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), m.size());
    total /= f;
  }
  return total.fits_slong_p() ? total.get_si() : LLONG_MAX;
}

RsdEstimate rsd_exact(const Instance& instance, long long ordering_limit) {
  const long long count = rsd_exact_orderings(instance);
  if (count > ordering_limit)
    throw std::length_error("exact RSD needs " + (count == LLONG_MAX ? std::string("too many") : std::to_string(count)) +
                            " orderings, limit is " + std::to_string(ordering_limit));
  const int n = instance.num_agents();
  const int m = instance.num_objects();
  const auto p = partition_by_preferences(instance);

  std::vector<int> sequence;
  for (int i = 0; i < n; ++i) sequence.push_back(p.type_of[i]);
  std::sort(sequence.begin(), sequence.end());

  // per type and object, how often an agent of that type got the object
  std::vector<long long> hits(p.members.size() * std::size_t(m), 0);
  long long evaluated = 0;
  std::vector<int> left(m);
  do {
    left = instance.capacities();
    for (int t : sequence) {
      for (int j : instance.prefs(p.members[t].front())) {
        if (left[j] > 0) {
          --left[j];
          ++hits[std::size_t(t) * m + j];
          break;
        }
      }
    }
    ++evaluated;
  } while (std::next_permutation(sequence.begin(), sequence.end()));

  RsdEstimate out;
  out.assignment = ProbabilisticAssignment(n, m);
  out.sample_count = evaluated;
  out.exact = true;
  for (int i = 0; i < n; ++i) {
    const int t = p.type_of[i];
    const long long size = static_cast<long long>(p.members[t].size());
    for (int j = 0; j < m; ++j) {
      const long long h = hits[std::size_t(t) * m + j];
      if (h == 0) continue;
      Rational v{mpz_class(std::to_string(h)), mpz_class(std::to_string(evaluated)) * mpz_class(std::to_string(size))};
      v.canonicalize();
      out.assignment.at(i, j) = v;
    }
  }
  return out;
}

RsdEstimate rsd_sampled(const Instance& instance, long long samples, std::uint64_t seed, int shards, int threads) {
  if (samples < 1) throw std::invalid_argument("sample count must be >= 1");
  if (shards < 1) throw std::invalid_argument("shard count must be >= 1");
  const int n = instance.num_agents();
  const int m = instance.num_objects();
  shards = static_cast<int>(std::min<long long>(shards, samples));
  std::vector<std::vector<long long>> counts(shards, std::vector<long long>(std::size_t(n) * m, 0));

  auto run_shard = [&](int s) {
    const long long begin = samples * s / shards;
    const long long end = samples * (s + 1) / shards;
    Rng rng(seed + static_cast<std::uint64_t>(s));
    auto& c = counts[s];
    for (long long k = begin; k < end; ++k) {
      const auto order = random_ordering(rng, n);
      const Matching mt = serial_dictatorship(instance, order);
      for (int i = 0; i < n; ++i)
        if (mt.assigned(i)) ++c[std::size_t(i) * m + mt.object_of(i)];
    }
  };

  threads = std::max(1, std::min(threads, shards));
  if (threads == 1) {
    for (int s = 0; s < shards; ++s) run_shard(s);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&, w] {
        for (int s = w; s < shards; s += threads) run_shard(s);
      });
    for (auto& t : pool) t.join();
  }

  RsdEstimate out;
  out.assignment = ProbabilisticAssignment(n, m);
  out.sample_count = samples;
  out.seed = seed;
  out.exact = false;
  const mpz_class denom(std::to_string(samples));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      long long total = 0;
      for (int s = 0; s < shards; ++s) total += counts[s][std::size_t(i) * m + j];
      if (total == 0) continue;
      Rational v{mpz_class(std::to_string(total)), denom};
      v.canonicalize();
      out.assignment.at(i, j) = v;
    }
  return out;
}

}  // namespace maximin
