#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "limprob/families.hpp"
#include "limprob/measure.hpp"

namespace limprob {

// 2^n enumeration cap; closed forms cover larger n.
inline constexpr int kEnumerationLimit = 20;

// Exact distributions of the trial outcome X_n, the running maximum Y_n and
// the record index Z_n, computed by summing string probabilities over all
// 2^n outcomes.
struct ExactPmfs {
  DiscreteMeasure<Rational> trial;       // X_n
  DiscreteMeasure<Rational> max;         // Y_n
  DiscreteMeasure<Rational> record;      // Z_n
};

// String probabilities share the denominator b^n for q = a/b, so the sweep
// accumulates integer numerators and divides once at the end.
inline ExactPmfs enumerate_exact(const Rational& q, int n) {
  detail::require_open_unit(q, "q");
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (n > kEnumerationLimit)
    throw capacity_error("enumeration bound exceeded: n = " + std::to_string(n) + " > " +
                         std::to_string(kEnumerationLimit));

  const BigInt a = numerator(q);        // failure weight
  const BigInt r = denominator(q) - a;  // success weight
  std::vector<BigInt> pow_a(n + 1), pow_r(n + 1);
  pow_a[0] = pow_r[0] = 1;
  for (int i = 1; i <= n; ++i) {
    pow_a[i] = pow_a[i - 1] * a;
    pow_r[i] = pow_r[i - 1] * r;
  }

  BigInt trial_fail = 0, max_zero = 0;
  std::vector<BigInt> record_at(n + 1);
  const std::uint64_t strings = std::uint64_t(1) << n;
  for (std::uint64_t mask = 0; mask < strings; ++mask) {
    const int successes = std::popcount(mask);
    const BigInt weight = pow_a[n - successes] * pow_r[successes];
    if (!(mask & (std::uint64_t(1) << (n - 1)))) trial_fail += weight;
    if (mask == 0) max_zero += weight;
    // Z_n: the last index attaining the maximum. With no success every trial
    // attains the maximum 0, so Z_n = n.
    const int z = mask == 0 ? n : std::bit_width(mask);
    record_at[z] += weight;
  }

  const BigInt denom = boost::multiprecision::pow(denominator(q), unsigned(n));
  auto two_point = [&](const BigInt& at_zero) {
    Rational p0(at_zero, denom);
    return DiscreteMeasure<Rational>({{ExtendedReal(0), p0}, {ExtendedReal(1), 1 - p0}});
  };
  std::vector<DiscreteMeasure<Rational>::Atom> record_atoms;
  for (int j = 1; j <= n; ++j)
    record_atoms.push_back({ExtendedReal(j), Rational(record_at[j], denom)});
  return {two_point(trial_fail), two_point(max_zero),
          DiscreteMeasure<Rational>(std::move(record_atoms))};
}

// Counts per observed value for one simulated statistic.
struct EmpiricalPmf {
  std::map<long long, std::uint64_t> counts;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;

  double frequency(long long value) const {
    auto it = counts.find(value);
    return it == counts.end() ? 0.0 : double(it->second) / double(trials);
  }
};

struct EmpiricalPmfs {
  EmpiricalPmf trial;
  EmpiricalPmf max;
  EmpiricalPmf record;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Per-worker stream derived from (seed, worker); reproducible regardless of
// scheduling because shards merge in worker order.
inline std::mt19937_64 worker_rng(std::uint64_t seed, int worker) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(std::uint64_t(worker) + 1)));
}

struct ShardCounts {
  std::vector<std::uint64_t> trial_at{0, 0};
  std::vector<std::uint64_t> max_at{0, 0};
  std::vector<std::uint64_t> record_at;
};

inline ShardCounts simulate_shard(double fail_prob, int n, std::uint64_t trials,
                                  std::uint64_t seed, int worker) {
  ShardCounts c;
  c.record_at.assign(n + 1, 0);
  auto rng = worker_rng(seed, worker);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::uint64_t t = 0; t < trials; ++t) {
    int last_success = 0;
    bool nth_success = false;
    for (int j = 1; j <= n; ++j) {
      const bool success = unit(rng) >= fail_prob;
      if (success) last_success = j;
      if (j == n) nth_success = success;
    }
    const int z = last_success == 0 ? n : last_success;
    c.trial_at[nth_success ? 1 : 0] += 1;
    c.max_at[last_success > 0 ? 1 : 0] += 1;
    c.record_at[z] += 1;
  }
  return c;
}

}  // namespace detail

// Seeded Monte Carlo estimate of the three pmfs. Deterministic for a fixed
// (seed, workers) pair.
inline EmpiricalPmfs simulate(const Rational& q, int n, std::uint64_t trials, std::uint64_t seed,
                              int workers = 4) {
  detail::require_open_unit(q, "q");
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");

  const double fail_prob = to_double(q);
  const std::uint64_t per = trials / workers;
  const std::uint64_t extra = trials % workers;

  std::vector<detail::ShardCounts> shards(workers);
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    const std::uint64_t share = per + (std::uint64_t(w) < extra ? 1 : 0);
    pool.emplace_back([&, w, share] {
      shards[w] = detail::simulate_shard(fail_prob, n, share, seed, w);
    });
  }
  for (auto& t : pool) t.join();

  EmpiricalPmfs out;
  for (auto* pmf : {&out.trial, &out.max, &out.record}) {
    pmf->trials = trials;
    pmf->seed = seed;
  }
  for (const auto& s : shards) {
    for (int v = 0; v <= 1; ++v) {
      if (s.trial_at[v]) out.trial.counts[v] += s.trial_at[v];
      if (s.max_at[v]) out.max.counts[v] += s.max_at[v];
    }
    for (int j = 1; j <= n; ++j)
      if (s.record_at[j]) out.record.counts[j] += s.record_at[j];
  }
  return out;
}

// Residual of the per-n identity: the n-th trial failing while some earlier
// trial succeeded is exactly the record index falling below n, so
//   trial({0}) - max({0}) - record((-inf, n))
// vanishes. Either route is exact; the enumeration route is capped at 2^n.
inline Rational check_identity(const Rational& q, int n, bool from_enumeration = false) {
  Rational trial_fail, max_zero, record_below;
  const EventSet below_n = EventSet::ray_below(ExtendedReal(n), false);
  if (from_enumeration) {
    ExactPmfs pmfs = enumerate_exact(q, n);
    trial_fail = pmfs.trial.mass_at(ExtendedReal(0));
    max_zero = pmfs.max.mass_at(ExtendedReal(0));
    record_below = pmfs.record.mass_of(below_n);
  } else {
    trial_fail = bernoulli_marginal<Rational>(q, n).mass_at(ExtendedReal(0));
    max_zero = running_max<Rational>(q, n).mass_at(ExtendedReal(0));
    record_below = record_index<Rational>(q, n).mass_of(below_n);
  }
  return trial_fail - max_zero - record_below;
}

// pmf table as CSV: value,exact,closed_form,empirical,abs_err. Empirical
// columns stay empty when no simulation is supplied.
inline std::string pmf_table_csv(const DiscreteMeasure<Rational>& exact,
                                 const DiscreteMeasure<Rational>& closed_form,
                                 const EmpiricalPmf* empirical = nullptr) {
  std::ostringstream out;
  out << "value,exact,closed_form,empirical,abs_err\n";
  for (const auto& atom : exact.atoms()) {
    out << format_point(atom.point) << "," << format_rational(atom.mass) << ","
        << format_rational(closed_form.mass_at(atom.point)) << ",";
    if (empirical && atom.point.is_finite()) {
      const double freq = empirical->frequency(atom.point.value().convert_to<long long>());
      out << format_double(freq) << "," << format_double(std::abs(freq - to_double(atom.mass)));
    } else {
      out << ",";
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace limprob
