#pragma once

#include <compare>
#include <limits>
#include <string>

#include "limprob/rational.hpp"

namespace limprob {

// A point on the extended real line: a finite rational, or one of the two
// infinities. Finite points compare exactly in the rational backing; the
// total order puts -inf below every finite value and +inf above.
class ExtendedReal {
 public:
  enum class Kind { minus_infinity, finite, plus_infinity };

  ExtendedReal() : kind_(Kind::finite), value_(0) {}
  ExtendedReal(Rational value) : kind_(Kind::finite), value_(std::move(value)) {}
  ExtendedReal(int value) : kind_(Kind::finite), value_(value) {}

  static ExtendedReal plus_infinity() { return ExtendedReal(Kind::plus_infinity); }
  static ExtendedReal minus_infinity() { return ExtendedReal(Kind::minus_infinity); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::finite; }
  bool is_infinite() const { return kind_ != Kind::finite; }

  // Finite value; only meaningful when is_finite().
  const Rational& value() const { return value_; }

  double as_double() const {
    switch (kind_) {
      case Kind::minus_infinity: return -std::numeric_limits<double>::infinity();
      case Kind::plus_infinity: return std::numeric_limits<double>::infinity();
      default: return to_double(value_);
    }
  }

  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.kind_ != b.kind_) return false;
    return a.kind_ != Kind::finite || a.value_ == b.value_;
  }

  friend std::strong_ordering operator<=>(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.kind_ != b.kind_) return rank(a.kind_) <=> rank(b.kind_);
    if (a.kind_ != Kind::finite) return std::strong_ordering::equal;
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (a.value_ > b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  explicit ExtendedReal(Kind kind) : kind_(kind), value_(0) {}

  static int rank(Kind k) {
    switch (k) {
      case Kind::minus_infinity: return 0;
      case Kind::finite: return 1;
      default: return 2;
    }
  }

  Kind kind_;
  Rational value_;
};

inline std::string format_point(const ExtendedReal& p) {
  switch (p.kind()) {
    case ExtendedReal::Kind::minus_infinity: return "-inf";
    case ExtendedReal::Kind::plus_infinity: return "+inf";
    default: return format_rational(p.value());
  }
}

inline ExtendedReal parse_point(std::string_view text) {
  if (text == "-inf") return ExtendedReal::minus_infinity();
  if (text == "+inf" || text == "inf") return ExtendedReal::plus_infinity();
  return ExtendedReal(parse_rational(text));
}

}  // namespace limprob
