#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "limprob/measure.hpp"

namespace limprob {

namespace detail {

inline void require_index(int n) {
  if (n < 1) throw std::invalid_argument("family index n must be >= 1");
}

inline void require_open_unit(const Rational& q, const char* name) {
  if (q <= 0 || q >= 1)
    throw std::invalid_argument(std::string(name) + " must lie strictly between 0 and 1");
}

template <class Mass>
Mass mass_pow(const Rational& base, int exponent) {
  if constexpr (is_exact_mass_v<Mass>) {
    return pow_rational(base, static_cast<unsigned>(exponent));
  } else {
    return std::pow(to_double(base), exponent);
  }
}

}  // namespace detail

// --- Closed-form constructors ------------------------------------------------

// Single trial: failure {0} with mass q, success {1} with mass 1-q. The same
// measure for every n.
template <class Mass>
DiscreteMeasure<Mass> bernoulli_marginal(const Rational& q, int n) {
  detail::require_open_unit(q, "q");
  detail::require_index(n);
  Mass at0 = mass_from_rational<Mass>(q);
  return DiscreteMeasure<Mass>({{ExtendedReal(0), at0}, {ExtendedReal(1), Mass(1) - at0}});
}

// Largest outcome among the first n trials: {0} with mass q^n, {1} with the
// rest.
template <class Mass>
DiscreteMeasure<Mass> running_max(const Rational& q, int n) {
  detail::require_open_unit(q, "q");
  detail::require_index(n);
  Mass at0 = detail::mass_pow<Mass>(q, n);
  return DiscreteMeasure<Mass>({{ExtendedReal(0), at0}, {ExtendedReal(1), Mass(1) - at0}});
}

// Index of the last trial attaining the running maximum: mass (1-q) q^{n-j}
// at j = 1..n-1 and 1-q+q^n at j = n. Sums to 1 by telescoping.
template <class Mass>
DiscreteMeasure<Mass> record_index(const Rational& q, int n) {
  detail::require_open_unit(q, "q");
  detail::require_index(n);
  Mass one_minus_q = Mass(1) - mass_from_rational<Mass>(q);
  std::vector<typename DiscreteMeasure<Mass>::Atom> atoms;
  atoms.reserve(n);
  for (int j = 1; j < n; ++j)
    atoms.push_back({ExtendedReal(j), one_minus_q * detail::mass_pow<Mass>(q, n - j)});
  atoms.push_back({ExtendedReal(n), one_minus_q + detail::mass_pow<Mass>(q, n)});
  return DiscreteMeasure<Mass>(std::move(atoms));
}

// Unit mass at n.
template <class Mass>
DiscreteMeasure<Mass> dirac_walk(int n) {
  detail::require_index(n);
  return dirac<Mass>(ExtendedReal(n));
}

// Unit mass at 1/n.
template <class Mass>
DiscreteMeasure<Mass> dirac_recip(int n) {
  detail::require_index(n);
  return dirac<Mass>(ExtendedReal(Rational(1, n)));
}

// Number of successes in n trials with success probability p.
template <class Mass>
DiscreteMeasure<Mass> binomial(int n, const Rational& p) {
  detail::require_index(n);
  if (p < 0 || p > 1) throw std::invalid_argument("p must lie in [0, 1]");
  if (p == 0) return dirac<Mass>(ExtendedReal(0));
  if (p == 1) return dirac<Mass>(ExtendedReal(n));
  Mass pm = mass_from_rational<Mass>(p);
  Mass ratio = pm / (Mass(1) - pm);
  std::vector<typename DiscreteMeasure<Mass>::Atom> atoms;
  atoms.reserve(n + 1);
  Mass mass = detail::mass_pow<Mass>(1 - p, n);  // k = 0
  for (int k = 0; k <= n; ++k) {
    atoms.push_back({ExtendedReal(k), mass});
    if (k < n) mass = mass * Mass(n - k) / Mass(k + 1) * ratio;
  }
  return DiscreteMeasure<Mass>(std::move(atoms));
}

enum class TailPolicy { lump_at_kmax, renormalize };

// Smallest truncation point leaving tail mass below 1e-15.
inline int default_poisson_kmax(double c) {
  if (!(c > 0)) throw std::invalid_argument("c must be positive");
  double mass = std::exp(-c);
  double cumulative = mass;
  int k = 0;
  while (cumulative < 1.0 - 1e-15 && k < 4096) {
    ++k;
    mass *= c / k;
    cumulative += mass;
  }
  return std::max(k, 1);
}

// Poisson(c) truncated to {0..k_max}; the tail beyond k_max is either lumped
// onto the last atom or spread by renormalization, so total mass stays 1.
inline DiscreteMeasure<double> poisson_truncated(double c, int k_max,
                                                 TailPolicy policy = TailPolicy::lump_at_kmax) {
  if (!(c > 0)) throw std::invalid_argument("c must be positive");
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  std::vector<DiscreteMeasure<double>::Atom> atoms;
  atoms.reserve(k_max + 1);
  double mass = std::exp(-c);
  double covered = 0.0;
  for (int k = 0; k <= k_max; ++k) {
    atoms.push_back({ExtendedReal(k), mass});
    covered += mass;
    mass *= c / (k + 1);
  }
  if (policy == TailPolicy::lump_at_kmax) {
    atoms.back().mass += 1.0 - covered;
  } else {
    for (auto& a : atoms) a.mass /= covered;
  }
  return DiscreteMeasure<double>(std::move(atoms));
}

inline DiscreteMeasure<double> poisson_truncated(double c, TailPolicy policy) {
  return poisson_truncated(c, default_poisson_kmax(c), policy);
}

inline DiscreteMeasure<double> poisson_truncated(double c) {
  return poisson_truncated(c, default_poisson_kmax(c), TailPolicy::lump_at_kmax);
}

// --- Indexed families ---------------------------------------------------------

// A rule n -> measure with its parameters and, where one exists, the declared
// weak limit on the real line and/or on the extended line. Declared limits
// are data; the convergence checks verify them independently.
template <class Mass>
struct MeasureFamily {
  std::string name;
  std::map<std::string, Rational> params;
  std::function<DiscreteMeasure<Mass>(int)> generator;
  std::optional<DiscreteMeasure<Mass>> limit_on_R;
  std::optional<DiscreteMeasure<Mass>> limit_on_Rbar;

  DiscreteMeasure<Mass> operator()(int n) const { return generator(n); }
};

template <class Mass>
MeasureFamily<Mass> bernoulli_marginal_family(const Rational& q) {
  detail::require_open_unit(q, "q");
  auto self = bernoulli_marginal<Mass>(q, 1);
  return {"bernoulli_marginal",
          {{"q", q}},
          [q](int n) { return bernoulli_marginal<Mass>(q, n); },
          self,
          self};
}

template <class Mass>
MeasureFamily<Mass> running_max_family(const Rational& q) {
  detail::require_open_unit(q, "q");
  auto limit = dirac<Mass>(ExtendedReal(1));
  return {"running_max",
          {{"q", q}},
          [q](int n) { return running_max<Mass>(q, n); },
          limit,
          limit};
}

template <class Mass>
MeasureFamily<Mass> record_index_family(const Rational& q) {
  detail::require_open_unit(q, "q");
  return {"record_index",
          {{"q", q}},
          [q](int n) { return record_index<Mass>(q, n); },
          std::nullopt,
          dirac<Mass>(ExtendedReal::plus_infinity())};
}

template <class Mass>
MeasureFamily<Mass> dirac_walk_family() {
  return {"dirac_walk",
          {},
          [](int n) { return dirac_walk<Mass>(n); },
          std::nullopt,
          dirac<Mass>(ExtendedReal::plus_infinity())};
}

template <class Mass>
MeasureFamily<Mass> dirac_recip_family() {
  auto limit = dirac<Mass>(ExtendedReal(0));
  return {"dirac_recip", {}, [](int n) { return dirac_recip<Mass>(n); }, limit, limit};
}

// The scheme with p = c/n per index (clipped to 1 for n < c); in float mode
// its declared limit is the truncated Poisson(c).
template <class Mass>
MeasureFamily<Mass> binomial_family(const Rational& c) {
  if (c <= 0) throw std::invalid_argument("c must be positive");
  MeasureFamily<Mass> family;
  family.name = "binomial";
  family.params = {{"c", c}};
  family.generator = [c](int n) {
    detail::require_index(n);
    Rational p = c / n;
    if (p > 1) p = 1;
    return binomial<Mass>(n, p);
  };
  if constexpr (!is_exact_mass_v<Mass>) {
    family.limit_on_R = poisson_truncated(to_double(c));
    family.limit_on_Rbar = family.limit_on_R;
  }
  return family;
}

inline const std::vector<std::string>& family_names() {
  static const std::vector<std::string> names = {"bernoulli_marginal", "running_max",
                                                 "record_index",       "dirac_walk",
                                                 "dirac_recip",        "binomial"};
  return names;
}

// Registry lookup: family by name with a parameter map. Parameters are
// validated here so generators stay total.
template <class Mass>
MeasureFamily<Mass> make_family(const std::string& name,
                                const std::map<std::string, Rational>& params = {}) {
  auto get = [&](const char* key, const Rational& fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  if (name == "bernoulli_marginal") return bernoulli_marginal_family<Mass>(get("q", Rational(1, 2)));
  if (name == "running_max") return running_max_family<Mass>(get("q", Rational(1, 2)));
  if (name == "record_index") return record_index_family<Mass>(get("q", Rational(1, 2)));
  if (name == "dirac_walk") return dirac_walk_family<Mass>();
  if (name == "dirac_recip") return dirac_recip_family<Mass>();
  if (name == "binomial") return binomial_family<Mass>(get("c", Rational(1)));
  throw std::invalid_argument("unknown family: '" + name + "'");
}

// JSON parameter blob form, e.g. {"q": "1/2"}.
template <class Mass>
MeasureFamily<Mass> make_family(const std::string& name, const nlohmann::json& params) {
  std::map<std::string, Rational> parsed;
  for (auto it = params.begin(); it != params.end(); ++it) {
    if (it.value().is_string())
      parsed[it.key()] = parse_rational(it.value().get<std::string>());
    else if (it.value().is_number_integer())
      parsed[it.key()] = Rational(it.value().get<long long>());
    else
      throw std::invalid_argument("family parameter '" + it.key() +
                                  "' must be a string or integer");
  }
  return make_family<Mass>(name, parsed);
}

}  // namespace limprob
