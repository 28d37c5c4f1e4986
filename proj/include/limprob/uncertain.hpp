#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "limprob/rational.hpp"

namespace limprob {

// The first m digits of a base-b expansion, plus a nonnegative integer part.
// Specifying finitely many digits pins the value down to a half-open window
// of width b^-m, never to a point.
struct DigitPrefix {
  int base = 10;
  std::vector<int> digits;
  BigInt integer_part = 0;
};

inline void validate_prefix(const DigitPrefix& p) {
  if (p.base < 2) throw std::invalid_argument("base must be >= 2");
  if (p.digits.empty()) throw std::invalid_argument("prefix needs at least one digit");
  if (p.integer_part < 0) throw std::invalid_argument("integer part must be nonnegative");
  for (int d : p.digits)
    if (d < 0 || d >= p.base)
      throw std::invalid_argument("digit " + std::to_string(d) + " out of range for base " +
                                  std::to_string(p.base));
}

// Half-open window [lo, hi) of every value sharing the prefix; hi - lo is
// exactly base^-m.
struct UncertainInterval {
  Rational lo;
  Rational hi;

  Rational width() const { return hi - lo; }
  bool contains(const Rational& x) const { return x >= lo && x < hi; }
};

inline UncertainInterval uncertain_interval(const DigitPrefix& p) {
  validate_prefix(p);
  BigInt scale = 1;
  BigInt units = 0;
  for (int d : p.digits) {
    scale *= p.base;
    units = units * p.base + d;
  }
  Rational lo = Rational(p.integer_part) + Rational(units, scale);
  return {lo, lo + Rational(1, scale)};
}

// One more digit: the window shrinks by a factor of base and stays strictly
// inside its parent.
inline DigitPrefix refine(DigitPrefix p, int next_digit) {
  validate_prefix(p);
  if (next_digit < 0 || next_digit >= p.base)
    throw std::invalid_argument("digit " + std::to_string(next_digit) + " out of range for base " +
                                std::to_string(p.base));
  p.digits.push_back(next_digit);
  return p;
}

inline bool contains(const DigitPrefix& p, const Rational& x) {
  return uncertain_interval(p).contains(x);
}

// "a.d1d2..." in the prefix base (2..10); digits after the point become the
// prefix, the part before it the integer part.
inline DigitPrefix parse_prefix(const std::string& text, int base = 10) {
  if (base < 2 || base > 10)
    throw std::invalid_argument("prefix strings support bases 2 through 10");
  auto dot = text.find('.');
  if (dot == std::string::npos || dot + 1 >= text.size())
    throw std::invalid_argument("prefix must look like '0.141': '" + text + "'");
  DigitPrefix p;
  p.base = base;
  std::string whole = text.substr(0, dot);
  if (whole.empty()) whole = "0";
  for (char c : whole)
    if (c < '0' || c > '9')
      throw std::invalid_argument("bad integer part in prefix: '" + text + "'");
  p.integer_part = BigInt(whole);
  for (char c : text.substr(dot + 1)) {
    if (c < '0' || c > '9')
      throw std::invalid_argument("bad digit in prefix: '" + text + "'");
    p.digits.push_back(c - '0');
  }
  validate_prefix(p);
  return p;
}

inline std::string format_prefix(const DigitPrefix& p) {
  std::string out = p.integer_part.str() + ".";
  for (int d : p.digits) out += char('0' + d);
  return out;
}

// Transmission probabilities through crossed polarizers at angle theta: the
// image of the theta window under cos^2, a monotone decreasing map on
// [0, pi/2]. Endpoints are evaluated in floating point and padded outward a
// few ulps, so the half-open orientation flips to (lo, hi].
struct TransmissionRange {
  double lo;  // cos^2 at the upper theta endpoint, open
  double hi;  // cos^2 at the lower theta endpoint, closed

  bool contains(double p) const { return p > lo && p <= hi; }
  double width() const { return hi - lo; }
};

namespace detail {

inline double pad_down(double x, int ulps = 4) {
  for (int i = 0; i < ulps; ++i) x = std::nextafter(x, -1.0);
  return std::max(x, 0.0);
}

inline double pad_up(double x, int ulps = 4) {
  for (int i = 0; i < ulps; ++i) x = std::nextafter(x, 2.0);
  return std::min(x, 1.0);
}

}  // namespace detail

inline TransmissionRange transmission_range(const DigitPrefix& theta) {
  UncertainInterval window = uncertain_interval(theta);
  const double half_pi = std::acos(0.0);
  const double lo_theta = to_double(window.lo);
  const double hi_theta = to_double(window.hi);
  if (lo_theta < 0.0 || hi_theta > half_pi)
    throw std::domain_error("theta window [" + format_rational(window.lo) + ", " +
                            format_rational(window.hi) + ") must lie within [0, pi/2] radians");
  const double at_hi = std::cos(hi_theta);
  const double at_lo = std::cos(lo_theta);
  return {detail::pad_down(at_hi * at_hi), detail::pad_up(at_lo * at_lo)};
}

}  // namespace limprob
