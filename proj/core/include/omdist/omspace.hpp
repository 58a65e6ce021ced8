#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "omdist/rational.hpp"

namespace omdist {

// Exact model of an order-of-magnitude space built on a positive
// infinitesimal `d` (rendered as δ in pretty output). A point is a finite
// polynomial in `d` with integer coefficients and rational exponents; an
// order of magnitude is zero or a single power of `d`. Powers compare
// upside down: d^m is much smaller than d^n exactly when m > n, so negative
// exponents give arbitrarily large magnitudes and rational exponents make
// the magnitude order dense. Everything here is immutable and pure.

// Zero or d^q for a rational exponent q.
class Om {
 public:
  static Om zero() { return Om{}; }
  static Om delta_power(Rat exponent) {
    Om d;
    d.exponent_ = std::move(exponent);
    return d;
  }

  bool is_zero() const { return !exponent_.has_value(); }
  // Precondition: !is_zero().
  const Rat& exponent() const;

  friend bool operator==(const Om& a, const Om& b) {
    return a.exponent_ == b.exponent_;
  }

 private:
  Om() = default;
  std::optional<Rat> exponent_;
};

enum class OmCmp { MuchLess, Equal, MuchGreater };

// Total order on orders of magnitude; zero is minimal.
OmCmp om_cmp(const Om& d, const Om& e);

inline bool much_less(const Om& d, const Om& e) {
  return om_cmp(d, e) == OmCmp::MuchLess;
}
// The weak comparison: much less or equal.
inline bool much_less_eq(const Om& d, const Om& e) {
  return om_cmp(d, e) != OmCmp::MuchGreater;
}

// A point: finite map exponent -> non-zero integer coefficient. The zero
// polynomial is the empty map. Two points are equal iff their maps are.
class OmPoint {
 public:
  OmPoint() = default;

  static OmPoint constant(Int value);
  static OmPoint delta_power(const Rat& exponent);
  // coefficient * d^exponent
  static OmPoint term(Int coefficient, const Rat& exponent);

  bool is_zero() const { return terms_.empty(); }
  const std::map<Rat, Int>& terms() const { return terms_; }

  OmPoint operator+(const OmPoint& other) const;
  OmPoint operator-(const OmPoint& other) const;
  OmPoint operator-() const;
  OmPoint scaled(const Int& factor) const;

  friend bool operator==(const OmPoint& a, const OmPoint& b) {
    return a.terms_ == b.terms_;
  }

 private:
  void add_term(const Rat& exponent, const Int& coefficient);
  std::map<Rat, Int> terms_;
};

// Strict total order of points on the line, for an infinitesimal d > 0:
// the sign of a - b is the sign of the coefficient on its smallest exponent
// (the dominant term). Returns -1, 0, or +1.
int point_cmp(const OmPoint& a, const OmPoint& b);

// Order of magnitude of the distance between two points: zero iff a = b,
// otherwise the smallest power of d in a - b.
Om od(const OmPoint& a, const OmPoint& b);

// {base, base + d, base + 2d, ...}: `count` points whose pairwise od is
// exactly `scale`, in strictly increasing point order, starting at `base`.
// Throws std::invalid_argument on count < 1 or a degenerate (zero) scale
// with count > 1.
std::vector<OmPoint> points_at_scale(const OmPoint& base, const Om& scale,
                                     int count);

// Rendering and lossless parsing, e.g. "1 - 5*d^2 + 4*d^4", "d^(3/2)", "0".
std::string to_string(const OmPoint& p);
std::string to_string(const Om& d);
// Throws std::invalid_argument with a column position on malformed input.
OmPoint parse_om_point(const std::string& text);

}  // namespace omdist
