#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <json.hpp>

#include "limprob/events.hpp"
#include "limprob/extended_real.hpp"
#include "limprob/rational.hpp"

namespace limprob {

// Float-mode masses must sum to 1 within this; rational-mode sums are exact.
inline constexpr double kMassTolerance = 1e-12;

template <class Mass>
inline constexpr bool is_exact_mass_v = std::is_same_v<Mass, Rational>;

template <class Mass>
Mass mass_from_rational(const Rational& r) {
  if constexpr (is_exact_mass_v<Mass>) {
    return r;
  } else {
    return to_double(r);
  }
}

// A finitely-supported probability measure on the extended real line. Atom
// positions are exact; masses are either exact rationals or doubles. A
// measure lives "on R" when it puts no mass at the infinities.
template <class Mass>
class DiscreteMeasure {
 public:
  struct Atom {
    ExtendedReal point;
    Mass mass;

    friend bool operator==(const Atom& a, const Atom& b) {
      return a.point == b.point && a.mass == b.mass;
    }
  };

  explicit DiscreteMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    normalize_atoms();
    validate_total();
  }

  static DiscreteMeasure dirac(ExtendedReal point) {
    return DiscreteMeasure({Atom{std::move(point), Mass(1)}});
  }

  const std::vector<Atom>& atoms() const { return atoms_; }

  Mass mass_at(const ExtendedReal& p) const {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), p,
                               [](const Atom& a, const ExtendedReal& x) { return a.point < x; });
    if (it != atoms_.end() && it->point == p) return it->mass;
    return Mass(0);
  }

  Mass mass_of(const EventSet& e) const {
    Mass total(0);
    for (const auto& a : atoms_)
      if (e.contains(a.point)) total += a.mass;
    return total;
  }

  // Mass of [-inf, x]; the distribution function evaluated at a finite probe.
  Mass cdf(const ExtendedReal& x) const {
    Mass total(0);
    for (const auto& a : atoms_) {
      if (a.point > x) break;
      total += a.mass;
    }
    return total;
  }

  bool on_real_line() const {
    for (const auto& a : atoms_)
      if (a.point.is_infinite()) return false;
    return true;
  }

  friend bool operator==(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    return a.atoms_ == b.atoms_;
  }

  nlohmann::json to_json() const {
    nlohmann::json out;
    out["atoms"] = nlohmann::json::array();
    for (const auto& a : atoms_) {
      std::string mass = is_exact_mass_v<Mass> ? format_rational(Rational(a.mass))
                                               : format_double(static_cast<double>(a.mass));
      out["atoms"].push_back({{"point", format_point(a.point)}, {"mass", mass}});
    }
    out["mode"] = is_exact_mass_v<Mass> ? "rational" : "float";
    return out;
  }

  static DiscreteMeasure from_json(const nlohmann::json& j) {
    const std::string mode = j.at("mode").get<std::string>();
    const std::string expected = is_exact_mass_v<Mass> ? "rational" : "float";
    if (mode != expected)
      throw std::invalid_argument("measure mode mismatch: got '" + mode + "', expected '" +
                                  expected + "'");
    std::vector<Atom> atoms;
    for (const auto& ja : j.at("atoms")) {
      ExtendedReal point = parse_point(ja.at("point").get<std::string>());
      Mass mass = mass_from_rational<Mass>(parse_rational(ja.at("mass").get<std::string>()));
      atoms.push_back(Atom{std::move(point), std::move(mass)});
    }
    return DiscreteMeasure(std::move(atoms));
  }

 private:
  void normalize_atoms() {
    std::sort(atoms_.begin(), atoms_.end(),
              [](const Atom& a, const Atom& b) { return a.point < b.point; });
    std::vector<Atom> merged;
    for (auto& a : atoms_) {
      if (a.mass < Mass(0)) throw std::invalid_argument("negative atom mass");
      if (!merged.empty() && merged.back().point == a.point)
        merged.back().mass += a.mass;
      else
        merged.push_back(std::move(a));
    }
    std::erase_if(merged, [](const Atom& a) { return a.mass == Mass(0); });
    atoms_ = std::move(merged);
  }

  void validate_total() const {
    Mass total(0);
    for (const auto& a : atoms_) total += a.mass;
    if constexpr (is_exact_mass_v<Mass>) {
      if (total != 1) throw std::invalid_argument("atom masses must sum to 1 exactly");
    } else {
      if (std::abs(static_cast<double>(total) - 1.0) > kMassTolerance)
        throw std::invalid_argument("atom masses must sum to 1 within 1e-12");
    }
  }

  std::vector<Atom> atoms_;
};

template <class Mass>
DiscreteMeasure<Mass> dirac(ExtendedReal point) {
  return DiscreteMeasure<Mass>::dirac(std::move(point));
}

template <class Mass>
Mass measure_of_event(const DiscreteMeasure<Mass>& m, const EventSet& e) {
  return m.mass_of(e);
}

// Half the absolute pmf difference over the union of supports.
template <class Mass>
Mass tv_distance(const DiscreteMeasure<Mass>& a, const DiscreteMeasure<Mass>& b) {
  Mass total(0);
  auto ia = a.atoms().begin(), ib = b.atoms().begin();
  auto abs_mass = [](Mass m) { return m < Mass(0) ? Mass(-m) : m; };
  while (ia != a.atoms().end() || ib != b.atoms().end()) {
    if (ib == b.atoms().end() || (ia != a.atoms().end() && ia->point < ib->point)) {
      total += ia->mass;
      ++ia;
    } else if (ia == a.atoms().end() || ib->point < ia->point) {
      total += ib->mass;
      ++ib;
    } else {
      total += abs_mass(ia->mass - ib->mass);
      ++ia;
      ++ib;
    }
  }
  return total / Mass(2);
}

inline DiscreteMeasure<double> to_float(const DiscreteMeasure<Rational>& m) {
  std::vector<DiscreteMeasure<double>::Atom> atoms;
  atoms.reserve(m.atoms().size());
  for (const auto& a : m.atoms())
    atoms.push_back({a.point, to_double(a.mass)});
  return DiscreteMeasure<double>(std::move(atoms));
}

}  // namespace limprob
