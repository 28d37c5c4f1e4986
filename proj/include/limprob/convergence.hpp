#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "limprob/events.hpp"
#include "limprob/families.hpp"
#include "limprob/measure.hpp"

namespace limprob {

inline constexpr int kDefaultTailWindow = 20;
inline constexpr double kDefaultTol = 1e-9;

// --- probability paths and numeric limits -----------------------------------

// The sequence rho_n(E_n) for n = 1..N.
template <class Mass>
std::vector<Mass> probability_path(const MeasureFamily<Mass>& family, const EventRule& rule,
                                   int N) {
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  std::vector<Mass> path;
  path.reserve(N);
  for (int n = 1; n <= N; ++n) path.push_back(family(n).mass_of(apply_rule(rule, n)));
  return path;
}

// Tail-window Cauchy test: a limit is reported when the last `window` terms
// spread less than tol, and its value is their mean. Slowly divergent
// sequences can fool this; the built-in paths all converge geometrically.
inline std::optional<double> numeric_limit(std::span<const double> values, double tol = kDefaultTol,
                                           int window = kDefaultTailWindow) {
  if (values.empty()) throw std::invalid_argument("sequence must be non-empty");
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  const size_t w = std::min<size_t>(window, values.size());
  auto tail = values.subspan(values.size() - w);
  const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
  if (*hi - *lo >= tol) return std::nullopt;
  double sum = 0.0;
  for (double v : tail) sum += v;
  return sum / double(w);
}

// --- tightness ----------------------------------------------------------------

struct TightnessWitness {
  double bound;         // the interval [-b, b] that failed
  int n;                // smallest index with too much mass outside
  double mass_outside;  // that mass; at least epsilon
};

struct TightnessVerdict {
  bool tight = false;
  double epsilon = 0.0;
  EventSet interval;                        // smallest sufficient interval when tight
  std::vector<TightnessWitness> witnesses;  // one per scanned bound when not
  int scan_N = 0;
  double scan_b_max = 0.0;
};

namespace detail {

inline double mass_outside(const DiscreteMeasure<double>& m, const ExtendedReal& lo,
                           const ExtendedReal& hi) {
  double inside = 0.0;
  for (const auto& a : m.atoms())
    if (!(a.point < lo) && !(a.point > hi)) inside += a.mass;
  return 1.0 - inside;
}

}  // namespace detail

// Scans closed intervals [-b, b] with b doubling up to b_max over n <= N.
// Tight: the first sufficient interval is trimmed down to the smallest
// atom-spanned one. Not tight: each scanned bound gets a witness.
inline TightnessVerdict tightness_check(const MeasureFamily<double>& family, double epsilon, int N,
                                        double b_max) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0))
    throw std::invalid_argument("epsilon must lie strictly between 0 and 1");
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  if (!(b_max >= 1.0)) throw std::invalid_argument("b_max must be >= 1");

  std::vector<DiscreteMeasure<double>> measures;
  measures.reserve(N);
  for (int n = 1; n <= N; ++n) measures.push_back(family(n));

  auto sup_outside = [&](const ExtendedReal& lo, const ExtendedReal& hi) {
    double worst = 0.0;
    for (const auto& m : measures) worst = std::max(worst, detail::mass_outside(m, lo, hi));
    return worst;
  };
  auto first_offender = [&](const ExtendedReal& lo, const ExtendedReal& hi) {
    for (int n = 1; n <= N; ++n) {
      double outside = detail::mass_outside(measures[n - 1], lo, hi);
      if (outside >= epsilon) return TightnessWitness{0.0, n, outside};
    }
    return TightnessWitness{0.0, 0, 0.0};
  };

  std::vector<Rational> bounds;
  for (Rational b = 1; b < Rational(b_max); b *= 2) bounds.push_back(b);
  bounds.push_back(Rational(b_max));

  TightnessVerdict verdict;
  verdict.epsilon = epsilon;
  verdict.scan_N = N;
  verdict.scan_b_max = b_max;

  std::optional<Rational> sufficient;
  for (const auto& b : bounds) {
    if (sup_outside(ExtendedReal(Rational(-b)), ExtendedReal(b)) < epsilon) {
      sufficient = b;
      break;
    }
    TightnessWitness w = first_offender(ExtendedReal(Rational(-b)), ExtendedReal(b));
    w.bound = to_double(b);
    verdict.witnesses.push_back(w);
  }
  if (!sufficient) return verdict;

  verdict.tight = true;
  verdict.witnesses.clear();

  // Trim to the smallest closed interval spanned by atoms that still keeps
  // sup_n mass outside below epsilon.
  std::set<Rational> support;
  for (const auto& m : measures)
    for (const auto& a : m.atoms())
      if (a.point.is_finite() && a.point.value() >= -*sufficient && a.point.value() <= *sufficient)
        support.insert(a.point.value());
  std::vector<Rational> points(support.begin(), support.end());
  size_t lo = 0, hi = points.empty() ? 0 : points.size() - 1;
  bool moved = true;
  while (moved && lo < hi) {
    moved = false;
    if (lo + 1 <= hi &&
        sup_outside(ExtendedReal(points[lo + 1]), ExtendedReal(points[hi])) < epsilon) {
      ++lo;
      moved = true;
    }
    if (lo + 1 <= hi &&
        sup_outside(ExtendedReal(points[lo]), ExtendedReal(points[hi - 1])) < epsilon) {
      --hi;
      moved = true;
    }
  }
  if (points.empty()) {
    verdict.interval = EventSet::interval(ExtendedReal(Rational(-*sufficient)), true,
                                          ExtendedReal(*sufficient), true);
  } else {
    verdict.interval =
        EventSet::interval(ExtendedReal(points[lo]), true, ExtendedReal(points[hi]), true);
  }
  return verdict;
}

// --- escape of mass -------------------------------------------------------------

struct EscapeRung {
  int n;
  double bound;
  double above;
  double below;
  double inside;
};

struct EscapeAccount {
  double mass_to_plus_inf = 0.0;
  double mass_to_minus_inf = 0.0;
  std::vector<DiscreteMeasure<double>::Atom> retained;  // remainder at the last rung
  bool settled = false;  // estimates stopped moving along the ladder
  std::vector<EscapeRung> rungs;
};

inline const std::vector<std::pair<int, double>>& default_escape_ladder() {
  static const std::vector<std::pair<int, double>> ladder = {
      {32, 4.0}, {64, 8.0}, {128, 16.0}, {256, 32.0}, {512, 64.0}};
  return ladder;
}

// For each rung take the mass beyond [-b, b] at the rung's large n, then let
// the bound grow along the ladder. The account settles when the last two
// rungs agree within tol.
inline EscapeAccount escaped_mass(const MeasureFamily<double>& family,
                                  std::span<const std::pair<int, double>> ladder,
                                  double tol = kDefaultTol) {
  if (ladder.empty()) throw std::invalid_argument("ladder must be non-empty");
  for (size_t i = 1; i < ladder.size(); ++i)
    if (ladder[i].first <= ladder[i - 1].first || ladder[i].second <= ladder[i - 1].second)
      throw std::invalid_argument("ladder must increase in both n and bound");

  EscapeAccount account;
  for (const auto& [n, bound] : ladder) {
    auto m = family(n);
    double above = 0.0, below = 0.0;
    for (const auto& a : m.atoms()) {
      if (a.point > ExtendedReal(Rational(bound)))
        above += a.mass;
      else if (a.point < ExtendedReal(Rational(-bound)))
        below += a.mass;
    }
    account.rungs.push_back({n, bound, above, below, 1.0 - above - below});
  }
  const auto& last = account.rungs.back();
  account.mass_to_plus_inf = last.above;
  account.mass_to_minus_inf = last.below;
  if (account.rungs.size() >= 2) {
    const auto& prev = account.rungs[account.rungs.size() - 2];
    account.settled = std::abs(last.above - prev.above) <= tol &&
                      std::abs(last.below - prev.below) <= tol;
  }
  auto final_measure = family(last.n);
  for (const auto& a : final_measure.atoms())
    if (a.point.is_finite() && a.point.value() >= Rational(-last.bound) &&
        a.point.value() <= Rational(last.bound))
      account.retained.push_back(a);
  return account;
}

inline EscapeAccount escaped_mass(const MeasureFamily<double>& family, double tol = kDefaultTol) {
  return escaped_mass(family, default_escape_ladder(), tol);
}

// --- weak limit verification ------------------------------------------------------

enum class LimitVerdict { confirmed, refuted, inconclusive };

struct WeakLimitCheck {
  LimitVerdict verdict = LimitVerdict::inconclusive;
  std::string witness;  // what refuted or stayed unsettled
};

namespace detail {

// Fixed probe locations bracketing every candidate atom: a quarter of the
// smallest inter-atom gap on each side, midpoints between neighbours, and
// margins beyond the hull. Probes never sit on candidate atoms, so each is a
// continuity point of the candidate's distribution function.
inline std::vector<ExtendedReal> cdf_probes(const std::vector<Rational>& atom_points) {
  std::set<Rational> probes;
  if (atom_points.empty()) return {};
  Rational gap = atom_points.size() > 1 ? Rational(atom_points[1] - atom_points[0]) : Rational(1);
  for (size_t i = 1; i < atom_points.size(); ++i) {
    Rational step(atom_points[i] - atom_points[i - 1]);
    if (step < gap) gap = step;
  }
  const Rational r = gap / 4;
  for (const auto& a : atom_points) {
    probes.insert(a - r);
    probes.insert(a + r);
  }
  for (size_t i = 1; i < atom_points.size(); ++i)
    probes.insert((atom_points[i] + atom_points[i - 1]) / 2);
  probes.insert(atom_points.front() - 1);
  probes.insert(atom_points.back() + 1);
  std::vector<ExtendedReal> out;
  for (const auto& p : probes) out.emplace_back(p);
  return out;
}

struct ProbeScan {
  bool all_match = true;
  bool refuted = false;
  std::string witness;
};

// Compares F_n against the candidate's distribution function at fixed probes
// over the tail window. A probe refutes when the tail has settled away from
// the candidate; an unsettled, non-matching probe leaves the scan open.
inline ProbeScan scan_probes(const MeasureFamily<double>& family,
                             const DiscreteMeasure<double>& candidate,
                             const std::vector<ExtendedReal>& probes, int N, double tol) {
  ProbeScan scan;
  const int w = std::min(kDefaultTailWindow, N);
  std::vector<DiscreteMeasure<double>> window;
  window.reserve(w);
  for (int n = N - w + 1; n <= N; ++n) window.push_back(family(n));
  for (const auto& p : probes) {
    const double target = candidate.cdf(p);
    double lo = 1.0, hi = 0.0, dev = 0.0;
    for (const auto& m : window) {
      const double v = m.cdf(p);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      dev = std::max(dev, std::abs(v - target));
    }
    if (dev <= tol) continue;
    scan.all_match = false;
    std::ostringstream note;
    if (hi - lo <= tol) {
      scan.refuted = true;
      note << "F_n(" << format_point(p) << ") settles near " << format_double(hi)
           << " but the candidate has " << format_double(target);
      scan.witness = note.str();
      return scan;
    }
    note << "F_n(" << format_point(p) << ") still moves by " << format_double(hi - lo)
         << " at the tail window";
    scan.witness = note.str();
  }
  return scan;
}

}  // namespace detail

// Checks CDF convergence toward a candidate limit supported on the real line
// (portmanteau at continuity points, which probes off the atoms are), plus
// tightness of the family.
inline WeakLimitCheck verify_weak_limit(const MeasureFamily<double>& family,
                                        const DiscreteMeasure<double>& candidate, int N = 200,
                                        double tol = kDefaultTol) {
  if (!candidate.on_real_line())
    throw std::invalid_argument("candidate for a real-line weak limit must put no mass at +-inf");
  if (N < 1) throw std::invalid_argument("N must be >= 1");

  auto tightness = tightness_check(family, 1e-3, std::min(N, 500), 64.0);
  if (!tightness.tight) {
    WeakLimitCheck check;
    check.verdict = LimitVerdict::refuted;
    const auto& w = tightness.witnesses.back();
    std::ostringstream note;
    note << "not tight: mass " << format_double(w.mass_outside) << " outside [-"
         << format_double(w.bound) << ", " << format_double(w.bound) << "] at n = " << w.n;
    check.witness = note.str();
    return check;
  }

  std::vector<Rational> atom_points;
  for (const auto& a : candidate.atoms()) atom_points.push_back(a.point.value());
  auto scan = detail::scan_probes(family, candidate, detail::cdf_probes(atom_points), N, tol);
  WeakLimitCheck check;
  if (scan.refuted) {
    check.verdict = LimitVerdict::refuted;
    check.witness = scan.witness;
  } else if (scan.all_match) {
    check.verdict = LimitVerdict::confirmed;
  } else {
    check.verdict = LimitVerdict::inconclusive;
    check.witness = scan.witness;
  }
  return check;
}

// Weak limit on the extended line: escaped mass becomes atoms at the
// infinities. A declared limit is verified (escape totals plus CDF probes at
// fixed finite locations); otherwise atom-wise tail limits are assembled.
// Returns nothing when neither route verifies at the given tolerance.
inline std::optional<DiscreteMeasure<double>> extended_limit(const MeasureFamily<double>& family,
                                                             int N = 200,
                                                             double tol = kDefaultTol) {
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  const auto& ladder = default_escape_ladder();
  // Probe depth follows the ladder so slowly mixing families (q near 1) have
  // settled by the time the tail window is read.
  N = std::max(N, ladder.back().first);
  EscapeAccount escape = escaped_mass(family, ladder, std::max(tol, kDefaultTol));

  auto verify_candidate = [&](const DiscreteMeasure<double>& candidate) {
    if (std::abs(escape.mass_to_plus_inf - candidate.mass_at(ExtendedReal::plus_infinity())) > tol)
      return false;
    if (std::abs(escape.mass_to_minus_inf - candidate.mass_at(ExtendedReal::minus_infinity())) >
        tol)
      return false;
    std::vector<Rational> probe_seeds;
    for (const auto& a : candidate.atoms())
      if (a.point.is_finite()) probe_seeds.push_back(a.point.value());
    auto probes = detail::cdf_probes(probe_seeds);
    for (const auto& [n, bound] : ladder) {
      probes.emplace_back(Rational(bound));
      probes.emplace_back(Rational(-bound));
    }
    auto scan = detail::scan_probes(family, candidate, probes, N, tol);
    return scan.all_match;
  };

  if (family.limit_on_Rbar && verify_candidate(*family.limit_on_Rbar)) return family.limit_on_Rbar;
  if (family.limit_on_R && verify_candidate(*family.limit_on_R)) return family.limit_on_R;

  // Atom-wise construction: per-point tail limits at the last rung, plus the
  // escaped mass at the infinities.
  const int last_n = ladder.back().first;
  const double last_b = ladder.back().second;
  const int w = std::min(kDefaultTailWindow, last_n);
  std::vector<DiscreteMeasure<double>> window;
  for (int n = last_n - w + 1; n <= last_n; ++n) window.push_back(family(n));
  std::vector<DiscreteMeasure<double>::Atom> atoms;
  double total = escape.mass_to_plus_inf + escape.mass_to_minus_inf;
  for (const auto& a : window.back().atoms()) {
    if (!a.point.is_finite() || a.point.value() < Rational(-last_b) ||
        a.point.value() > Rational(last_b))
      continue;
    double lo = 1.0, hi = 0.0, sum = 0.0;
    for (const auto& m : window) {
      const double v = m.mass_at(a.point);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      sum += v;
    }
    if (hi - lo > tol) return std::nullopt;  // drifting atom: no stable limit here
    const double mass = sum / w;
    if (mass > 0.0) {
      atoms.push_back({a.point, mass});
      total += mass;
    }
  }
  if (std::abs(total - 1.0) > std::max(tol, 1e-9)) return std::nullopt;
  if (escape.mass_to_plus_inf > 0.0)
    atoms.push_back({ExtendedReal::plus_infinity(), escape.mass_to_plus_inf});
  if (escape.mass_to_minus_inf > 0.0)
    atoms.push_back({ExtendedReal::minus_infinity(), escape.mass_to_minus_inf});
  for (auto& a : atoms) a.mass /= total;
  return DiscreteMeasure<double>(std::move(atoms));
}

// --- the coincidence classifier -----------------------------------------------------

enum class Coincidence { coincides, mismatch, limit_not_a_probability, no_numeric_limit };

inline std::string to_string(Coincidence c) {
  switch (c) {
    case Coincidence::coincides: return "coincides";
    case Coincidence::mismatch: return "mismatch";
    case Coincidence::limit_not_a_probability: return "limit_not_a_probability";
    default: return "no_numeric_limit";
  }
}

struct CoincidenceReport {
  std::string family;
  std::string rule;
  std::optional<double> numeric_limit;                      // lim_n [rho_n(E_n)]
  std::optional<DiscreteMeasure<double>> limit_measure_R;   // verified declared limit
  std::optional<DiscreteMeasure<double>> limit_measure_Rbar;
  LimitEvent limit_event_result = NoLimit{};
  Coincidence classification = Coincidence::no_numeric_limit;
  std::optional<double> measure_side_R;     // [lim rho_n](E) on the real line
  std::optional<double> measure_side_Rbar;  // same on the extended line
};

// Classifies lim_n [rho_n(E_n)] against [lim_n rho_n](E):
//   coincides               both sides exist on the real line and agree
//   mismatch                both sides exist on the real line and differ
//   limit_not_a_probability the sequence converges but no real-line
//                           measure/event limit pair backs it
//   no_numeric_limit        the sequence itself does not settle
inline CoincidenceReport coincidence_report(const MeasureFamily<double>& family,
                                            const EventRule& rule, int N = 200,
                                            double tol = kDefaultTol) {
  CoincidenceReport report;
  report.family = family.name;
  report.rule = rule.name;
  report.limit_event_result = limit_event(rule);

  auto path = probability_path(family, rule, N);
  report.numeric_limit = numeric_limit(path, tol);

  if (family.limit_on_R &&
      verify_weak_limit(family, *family.limit_on_R, N, tol).verdict == LimitVerdict::confirmed)
    report.limit_measure_R = family.limit_on_R;
  report.limit_measure_Rbar = extended_limit(family, N, tol);

  auto limit_set = limit_event_set(report.limit_event_result);
  if (limit_set) {
    if (report.limit_measure_R && limit_is_in_R(report.limit_event_result))
      report.measure_side_R = report.limit_measure_R->mass_of(*limit_set);
    if (report.limit_measure_Rbar)
      report.measure_side_Rbar = report.limit_measure_Rbar->mass_of(*limit_set);
  }

  if (!report.numeric_limit) {
    report.classification = Coincidence::no_numeric_limit;
  } else if (limit_is_in_R(report.limit_event_result) && report.measure_side_R) {
    report.classification = std::abs(*report.numeric_limit - *report.measure_side_R) <= tol
                                ? Coincidence::coincides
                                : Coincidence::mismatch;
  } else {
    report.classification = Coincidence::limit_not_a_probability;
  }
  return report;
}

// --- the two-route identity report ----------------------------------------------------

struct IdentityRow {
  int n;
  Rational trial_fail;    // lambda_n({0})
  Rational max_zero;      // gamma_n({0})
  Rational lhs;           // lambda_n({0}) - gamma_n({0})
  Rational rhs;           // mu_n((-inf, n))
  Rational residual;      // lhs - rhs; identically zero
};

struct InconsistencyReport {
  Rational q;
  std::vector<IdentityRow> rows;
  std::optional<double> left_numeric_limit;   // lim of the lhs path
  std::optional<double> right_numeric_limit;  // lim of the rhs path
  Coincidence right_side_classification = Coincidence::no_numeric_limit;
  double extended_trial_fail_mass = 0.0;   // [lim lambda_n]({0})
  double extended_record_mass_on_R = 0.0;  // [lim mu_n](R)
};

// Per-n the two routes agree exactly; the limit routes land on q and 0. The
// extended pair is reported side by side, never asserted equal.
inline InconsistencyReport inconsistency_demo(const Rational& q, int N,
                                              double tol = kDefaultTol) {
  detail::require_open_unit(q, "q");
  if (N < 1) throw std::invalid_argument("N must be >= 1");

  InconsistencyReport report;
  report.q = q;
  const EventSet real_line_event = EventSet::full_line(Universe::real_line);
  for (int n = 1; n <= N; ++n) {
    IdentityRow row;
    row.n = n;
    row.trial_fail = bernoulli_marginal<Rational>(q, n).mass_at(ExtendedReal(0));
    row.max_zero = running_max<Rational>(q, n).mass_at(ExtendedReal(0));
    row.lhs = row.trial_fail - row.max_zero;
    row.rhs = record_index<Rational>(q, n).mass_of(EventSet::ray_below(ExtendedReal(n), false));
    row.residual = row.lhs - row.rhs;
    report.rows.push_back(std::move(row));
  }

  const int scan_N = std::max(N, 300);
  auto record = record_index_family<double>(q);
  auto bernoulli = bernoulli_marginal_family<double>(q);
  auto rays = ray_growth_rule();

  std::vector<double> left_path;
  for (int n = 1; n <= scan_N; ++n)
    left_path.push_back(bernoulli(n).mass_at(ExtendedReal(0)) -
                        running_max<double>(q, n).mass_at(ExtendedReal(0)));
  report.left_numeric_limit = numeric_limit(left_path, tol);
  auto right_path = probability_path(record, rays, scan_N);
  report.right_numeric_limit = numeric_limit(right_path, tol);
  report.right_side_classification = coincidence_report(record, rays, scan_N, tol).classification;

  if (auto lambda_limit = extended_limit(bernoulli, scan_N, tol))
    report.extended_trial_fail_mass = lambda_limit->mass_at(ExtendedReal(0));
  if (auto mu_limit = extended_limit(record, scan_N, tol))
    report.extended_record_mass_on_R = mu_limit->mass_of(real_line_event);
  return report;
}

// --- JSON views -------------------------------------------------------------------

inline nlohmann::json to_json(const LimitEvent& l) {
  if (const auto* r = std::get_if<LimitInR>(&l))
    return {{"kind", "in_R"}, {"event", format_event(r->event)}};
  if (const auto* rb = std::get_if<LimitInRbarOnly>(&l))
    return {{"kind", "in_Rbar_only"}, {"event", format_event(rb->event)}};
  return {{"kind", "no_limit"}};
}

inline nlohmann::json to_json(const TightnessVerdict& v) {
  nlohmann::json out;
  out["outcome"] = v.tight ? "tight" : "not_tight";
  out["epsilon"] = v.epsilon;
  out["scan"] = {{"N", v.scan_N}, {"b_max", v.scan_b_max}};
  if (v.tight) {
    out["interval"] = format_event(v.interval);
  } else {
    out["witnesses"] = nlohmann::json::array();
    for (const auto& w : v.witnesses)
      out["witnesses"].push_back(
          {{"bound", w.bound}, {"n", w.n}, {"mass_outside", w.mass_outside}});
  }
  return out;
}

inline nlohmann::json to_json(const EscapeAccount& a) {
  nlohmann::json out;
  out["mass_to_plus_inf"] = a.mass_to_plus_inf;
  out["mass_to_minus_inf"] = a.mass_to_minus_inf;
  out["settled"] = a.settled;
  out["rungs"] = nlohmann::json::array();
  for (const auto& r : a.rungs)
    out["rungs"].push_back({{"n", r.n},
                            {"bound", r.bound},
                            {"above", r.above},
                            {"below", r.below},
                            {"inside", r.inside}});
  out["retained"] = nlohmann::json::array();
  for (const auto& atom : a.retained)
    out["retained"].push_back({{"point", format_point(atom.point)}, {"mass", atom.mass}});
  return out;
}

inline nlohmann::json to_json(const CoincidenceReport& r) {
  nlohmann::json out;
  out["family"] = r.family;
  out["rule"] = r.rule;
  out["numeric_limit"] = r.numeric_limit ? nlohmann::json(*r.numeric_limit) : nullptr;
  out["limit_measure_R"] = r.limit_measure_R ? r.limit_measure_R->to_json() : nullptr;
  out["limit_measure_Rbar"] = r.limit_measure_Rbar ? r.limit_measure_Rbar->to_json() : nullptr;
  out["limit_event"] = to_json(r.limit_event_result);
  out["classification"] = to_string(r.classification);
  out["measure_side_R"] = r.measure_side_R ? nlohmann::json(*r.measure_side_R) : nullptr;
  out["measure_side_Rbar"] = r.measure_side_Rbar ? nlohmann::json(*r.measure_side_Rbar) : nullptr;
  return out;
}

inline nlohmann::json to_json(const InconsistencyReport& r) {
  nlohmann::json out;
  out["q"] = format_rational(r.q);
  out["rows"] = nlohmann::json::array();
  for (const auto& row : r.rows)
    out["rows"].push_back({{"n", row.n},
                           {"trial_fail", format_rational(row.trial_fail)},
                           {"max_zero", format_rational(row.max_zero)},
                           {"lhs", format_rational(row.lhs)},
                           {"rhs", format_rational(row.rhs)},
                           {"residual", format_rational(row.residual)}});
  out["left_numeric_limit"] = r.left_numeric_limit ? nlohmann::json(*r.left_numeric_limit) : nullptr;
  out["right_numeric_limit"] =
      r.right_numeric_limit ? nlohmann::json(*r.right_numeric_limit) : nullptr;
  out["right_side_classification"] = to_string(r.right_side_classification);
  out["extended_pair"] = {{"trial_fail_mass_at_0", r.extended_trial_fail_mass},
                          {"record_mass_on_R", r.extended_record_mass_on_R}};
  return out;
}

}  // namespace limprob
