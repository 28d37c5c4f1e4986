#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>

namespace limprob {

// Exact arbitrary-precision rational; the backing type for atom positions,
// event endpoints and all exact-mode masses.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Thrown when a request exceeds a hard resource bound (e.g. the 2^n
// enumeration limit), as opposed to an invalid parameter value.
class capacity_error : public std::runtime_error {
 public:
  explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational pow_rational(const Rational& base, unsigned exponent) {
  using boost::multiprecision::pow;
  if (exponent == 0) return Rational(1);
  return Rational(pow(numerator(base), exponent), pow(denominator(base), exponent));
}

// Renders "p/q", or just "p" for integers.
inline std::string format_rational(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

// Shortest round-trip decimal form of a double.
inline std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

// Accepts "p/q", integer, and decimal strings; all parsed exactly.
// "0.375" becomes 3/8, "-2/6" becomes -1/3.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&] {
    throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
  };
  if (text.empty()) fail();

  bool negative = false;
  std::string_view body = text;
  if (body.front() == '+' || body.front() == '-') {
    negative = body.front() == '-';
    body.remove_prefix(1);
    if (body.empty()) fail();
  }

  auto digits_only = [](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };

  Rational value;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    std::string_view num = body.substr(0, slash);
    std::string_view den = body.substr(slash + 1);
    if (!digits_only(num) || !digits_only(den)) fail();
    BigInt d = BigInt(std::string(den));
    if (d == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
    value = Rational(BigInt(std::string(num)), d);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    std::string_view whole = body.substr(0, dot);
    std::string_view frac = body.substr(dot + 1);
    if (whole.empty() && frac.empty()) fail();
    if (!whole.empty() && !digits_only(whole)) fail();
    if (!frac.empty() && !digits_only(frac)) fail();
    BigInt scale = 1;
    for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
    BigInt units = whole.empty() ? BigInt(0) : BigInt(std::string(whole));
    BigInt cents = frac.empty() ? BigInt(0) : BigInt(std::string(frac));
    value = Rational(units * scale + cents, scale);
  } else {
    if (!digits_only(body)) fail();
    value = Rational(BigInt(std::string(body)));
  }
  return negative ? Rational(-value) : value;
}

}  // namespace limprob
