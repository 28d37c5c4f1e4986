#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "limprob/extended_real.hpp"

namespace limprob {

// Universe against which complements and memberships are taken. On the real
// line the infinities are excluded; on the extended line they are points.
enum class Universe { real_line, extended_line };

struct Interval {
  ExtendedReal lo;
  ExtendedReal hi;
  bool lo_closed = false;
  bool hi_closed = false;

  bool empty() const {
    if (lo > hi) return true;
    return lo == hi && !(lo_closed && hi_closed);
  }

  bool contains(const ExtendedReal& p) const {
    if (p < lo || (p == lo && !lo_closed)) return false;
    if (p > hi || (p == hi && !hi_closed)) return false;
    return true;
  }

  friend bool operator==(const Interval& a, const Interval& b) {
    return a.lo == b.lo && a.hi == b.hi && a.lo_closed == b.lo_closed &&
           a.hi_closed == b.hi_closed;
  }
};

// A finite union of intervals/singletons over the extended real line, kept
// canonical: components sorted, pairwise disjoint and non-adjacent.
class EventSet {
 public:
  EventSet() = default;

  explicit EventSet(std::vector<Interval> components) {
    for (auto& c : components)
      if (!c.empty()) components_.push_back(std::move(c));
    canonicalize();
  }

  static EventSet empty() { return EventSet(); }

  static EventSet singleton(ExtendedReal p) {
    return EventSet({Interval{p, p, true, true}});
  }

  static EventSet interval(ExtendedReal lo, bool lo_closed, ExtendedReal hi, bool hi_closed) {
    if (lo > hi) throw std::invalid_argument("interval endpoints out of order");
    return EventSet({Interval{std::move(lo), std::move(hi), lo_closed, hi_closed}});
  }

  // (-inf, hi) or (-inf, hi]
  static EventSet ray_below(ExtendedReal hi, bool hi_closed) {
    return interval(ExtendedReal::minus_infinity(), false, std::move(hi), hi_closed);
  }

  static EventSet full_line(Universe universe) {
    bool closed = universe == Universe::extended_line;
    return interval(ExtendedReal::minus_infinity(), closed, ExtendedReal::plus_infinity(), closed);
  }

  const std::vector<Interval>& components() const { return components_; }
  bool is_empty() const { return components_.empty(); }

  bool contains(const ExtendedReal& p) const {
    for (const auto& c : components_)
      if (c.contains(p)) return true;
    return false;
  }

  // Membership relative to a universe: points outside the universe are never
  // members, whatever the components say.
  bool member(const ExtendedReal& p, Universe universe) const {
    if (universe == Universe::real_line && p.is_infinite()) return false;
    return contains(p);
  }

  EventSet union_with(const EventSet& other) const {
    std::vector<Interval> all = components_;
    all.insert(all.end(), other.components_.begin(), other.components_.end());
    return EventSet(std::move(all));
  }

  // Set complement within the universe, canonical.
  EventSet complement(Universe universe) const {
    const Interval whole{ExtendedReal::minus_infinity(),
                         ExtendedReal::plus_infinity(),
                         universe == Universe::extended_line,
                         universe == Universe::extended_line};
    // Clip components to the universe so complements of extended-line events
    // make sense on the plain real line.
    std::vector<Interval> clipped;
    for (auto c : components_) {
      if (c.lo < whole.lo || (c.lo == whole.lo && c.lo_closed && !whole.lo_closed)) {
        c.lo = whole.lo;
        c.lo_closed = whole.lo_closed;
      }
      if (c.hi > whole.hi || (c.hi == whole.hi && c.hi_closed && !whole.hi_closed)) {
        c.hi = whole.hi;
        c.hi_closed = whole.hi_closed;
      }
      if (!c.empty()) clipped.push_back(std::move(c));
    }

    std::vector<Interval> gaps;
    ExtendedReal cursor = whole.lo;
    bool cursor_closed = whole.lo_closed;
    for (const auto& c : clipped) {
      Interval gap{cursor, c.lo, cursor_closed, !c.lo_closed};
      if (!gap.empty()) gaps.push_back(std::move(gap));
      cursor = c.hi;
      cursor_closed = !c.hi_closed;
    }
    Interval tail{cursor, whole.hi, cursor_closed, whole.hi_closed};
    if (!tail.empty()) gaps.push_back(std::move(tail));
    return EventSet(std::move(gaps));
  }

  bool subset_of(const EventSet& other) const { return union_with(other) == other; }

  friend bool operator==(const EventSet& a, const EventSet& b) {
    return a.components_ == b.components_;
  }

 private:
  void canonicalize() {
    std::sort(components_.begin(), components_.end(), [](const Interval& a, const Interval& b) {
      if (a.lo != b.lo) return a.lo < b.lo;
      return a.lo_closed && !b.lo_closed;
    });
    std::vector<Interval> merged;
    for (auto& c : components_) {
      if (merged.empty()) {
        merged.push_back(std::move(c));
        continue;
      }
      Interval& last = merged.back();
      bool overlaps = c.lo < last.hi;
      bool adjacent = c.lo == last.hi && (last.hi_closed || c.lo_closed);
      if (overlaps || adjacent) {
        if (c.hi > last.hi) {
          last.hi = c.hi;
          last.hi_closed = c.hi_closed;
        } else if (c.hi == last.hi) {
          last.hi_closed = last.hi_closed || c.hi_closed;
        }
      } else {
        merged.push_back(std::move(c));
      }
    }
    components_ = std::move(merged);
  }

  std::vector<Interval> components_;
};

// --- Textual syntax: "(-inf,3)", "{5}", "[0,1) u {4}" ---------------------

inline std::string format_event(const EventSet& e) {
  if (e.is_empty()) return "{}";
  std::string out;
  for (const auto& c : e.components()) {
    if (!out.empty()) out += " u ";
    if (c.lo == c.hi) {
      out += "{" + format_point(c.lo) + "}";
    } else {
      out += c.lo_closed ? '[' : '(';
      out += format_point(c.lo) + "," + format_point(c.hi);
      out += c.hi_closed ? ']' : ')';
    }
  }
  return out;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

inline Interval parse_component(std::string_view text) {
  text = trim(text);
  if (text.size() < 2) throw std::invalid_argument("bad event component: '" + std::string(text) + "'");
  if (text.front() == '{') {
    if (text.back() != '}') throw std::invalid_argument("unterminated singleton: '" + std::string(text) + "'");
    ExtendedReal p = parse_point(trim(text.substr(1, text.size() - 2)));
    return Interval{p, p, true, true};
  }
  bool lo_closed = text.front() == '[';
  bool hi_closed = text.back() == ']';
  if ((text.front() != '(' && text.front() != '[') || (text.back() != ')' && text.back() != ']'))
    throw std::invalid_argument("bad event component: '" + std::string(text) + "'");
  std::string_view body = text.substr(1, text.size() - 2);
  auto comma = body.find(',');
  if (comma == std::string_view::npos)
    throw std::invalid_argument("missing comma in interval: '" + std::string(text) + "'");
  ExtendedReal lo = parse_point(trim(body.substr(0, comma)));
  ExtendedReal hi = parse_point(trim(body.substr(comma + 1)));
  if (lo > hi) throw std::invalid_argument("interval endpoints out of order: '" + std::string(text) + "'");
  return Interval{std::move(lo), std::move(hi), lo_closed, hi_closed};
}

}  // namespace detail

inline EventSet parse_event(std::string_view text) {
  text = detail::trim(text);
  if (text.empty() || text == "{}" || text == "empty") return EventSet::empty();
  if (text == "R") return EventSet::full_line(Universe::real_line);
  if (text == "Rbar") return EventSet::full_line(Universe::extended_line);
  std::vector<Interval> parts;
  size_t pos = 0;
  while (true) {
    size_t sep = text.find(" u ", pos);
    if (sep == std::string_view::npos) sep = text.find(" U ", pos);
    if (sep == std::string_view::npos) {
      parts.push_back(detail::parse_component(text.substr(pos)));
      break;
    }
    parts.push_back(detail::parse_component(text.substr(pos, sep - pos)));
    pos = sep + 3;
  }
  return EventSet(std::move(parts));
}

// --- Recursive event rules -------------------------------------------------

// Declared limit of an event sequence: a limit inside the Borel sets of the
// real line, a limit that exists only on the extended line, or none at all.
struct LimitInR {
  EventSet event;
};
struct LimitInRbarOnly {
  EventSet event;
};
struct NoLimit {};
using LimitEvent = std::variant<LimitInR, LimitInRbarOnly, NoLimit>;

inline bool limit_is_in_R(const LimitEvent& l) { return std::holds_alternative<LimitInR>(l); }

inline std::optional<EventSet> limit_event_set(const LimitEvent& l) {
  if (const auto* r = std::get_if<LimitInR>(&l)) return r->event;
  if (const auto* rb = std::get_if<LimitInRbarOnly>(&l)) return rb->event;
  return std::nullopt;
}

// E_1 plus a step rule producing E_n from E_{n-1}. A closed form, when set,
// is the fast path; tests hold it to agreement with the iterated step.
struct EventRule {
  std::string name;
  EventSet seed;
  std::function<EventSet(const EventSet& prev, int n)> step;
  std::function<EventSet(int n)> closed_form;
  LimitEvent declared_limit = NoLimit{};
};

// E_n: the seed for n = 1, otherwise the step applied n-1 times.
inline EventSet apply_rule(const EventRule& rule, int n) {
  if (n < 1) throw std::invalid_argument("rule index must be >= 1");
  if (rule.closed_form) return rule.closed_form(n);
  EventSet current = rule.seed;
  for (int k = 2; k <= n; ++k) current = rule.step(current, k);
  return current;
}

inline EventSet apply_rule_iterated(const EventRule& rule, int n) {
  if (n < 1) throw std::invalid_argument("rule index must be >= 1");
  EventSet current = rule.seed;
  for (int k = 2; k <= n; ++k) current = rule.step(current, k);
  return current;
}

inline const LimitEvent& limit_event(const EventRule& rule) { return rule.declared_limit; }

// When E_n is monotone increasing over n = 1..N, a declared limit must
// contain every E_n. Rules that are not monotone are not checkable this way.
inline bool validate_declared_limit(const EventRule& rule, int N) {
  EventSet prev = apply_rule(rule, 1);
  for (int n = 2; n <= N; ++n) {
    EventSet cur = apply_rule(rule, n);
    if (!prev.subset_of(cur)) return true;  // not monotone: nothing to check
    prev = std::move(cur);
  }
  auto limit = limit_event_set(rule.declared_limit);
  if (!limit) return true;  // no declared limit event, nothing to validate
  return prev.subset_of(*limit);
}

// --- Built-in rules ---------------------------------------------------------

// E_n = {n}: the singleton walks right one step per index; the limit exists
// only on the extended line, at {+inf}.
inline EventRule singleton_shift_rule() {
  EventRule rule;
  rule.name = "singleton_shift";
  rule.seed = EventSet::singleton(ExtendedReal(1));
  rule.step = [](const EventSet& prev, int) {
    if (prev.components().size() != 1 || !(prev.components()[0].lo == prev.components()[0].hi))
      throw std::invalid_argument("singleton_shift expects a singleton");
    const ExtendedReal& p = prev.components()[0].lo;
    return EventSet::singleton(ExtendedReal(p.value() + 1));
  };
  rule.closed_form = [](int n) { return EventSet::singleton(ExtendedReal(n)); };
  rule.declared_limit = LimitInRbarOnly{EventSet::singleton(ExtendedReal::plus_infinity())};
  return rule;
}

inline EventRule identity_rule(EventSet seed, std::string name = "identity") {
  EventRule rule;
  rule.name = std::move(name);
  rule.seed = seed;
  rule.step = [](const EventSet& prev, int) { return prev; };
  rule.closed_form = [seed](int) { return seed; };
  rule.declared_limit = LimitInR{std::move(seed)};
  return rule;
}

// E_n = E_{n-1} u [n-1, n) = (-inf, n); the limit is the whole real line.
inline EventRule ray_growth_rule() {
  EventRule rule;
  rule.name = "ray_growth";
  rule.seed = EventSet::ray_below(ExtendedReal(1), false);
  rule.step = [](const EventSet& prev, int n) {
    return prev.union_with(EventSet::interval(ExtendedReal(n - 1), true, ExtendedReal(n), false));
  };
  rule.closed_form = [](int n) { return EventSet::ray_below(ExtendedReal(n), false); };
  rule.declared_limit = LimitInR{EventSet::full_line(Universe::real_line)};
  return rule;
}

inline EventRule make_rule(const std::string& name, const EventSet& identity_seed) {
  if (name == "singleton_shift") return singleton_shift_rule();
  if (name == "ray_growth") return ray_growth_rule();
  if (name == "identity") return identity_rule(identity_seed);
  throw std::invalid_argument("unknown event rule: '" + name + "'");
}

}  // namespace limprob
