#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace omdist {

// All arithmetic in the library is exact. Coefficients are arbitrary-precision
// integers, exponents and labels are arbitrary-precision rationals. There is
// no floating point anywhere in core.
using Int = mpz_class;
using Rat = mpq_class;

// Canonical rendering: "3", "-7/2". Inverse of rat_from_string.
inline std::string rat_to_string(const Rat& q) { return q.get_str(); }

// Accepts an optionally signed integer or "p/q" with q > 0 after
// canonicalization. Returns nullopt on malformed input or zero denominator.
inline std::optional<Rat> rat_from_string(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t digits = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c >= '0' && c <= '9') {
      ++digits;
      continue;
    }
    if (c == '-' && (i == 0 || s[i - 1] == '/')) continue;
    if (c == '/' && i > 0 && i + 1 < s.size() && s.find('/') == i) continue;
    return std::nullopt;
  }
  if (digits == 0) return std::nullopt;
  Rat q;
  if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0) return std::nullopt;
  if (mpz_sgn(mpq_denref(q.get_mpq_t())) == 0) return std::nullopt;
  q.canonicalize();
  return q;
}

// mpq_class(n, d) does not canonicalize; this does.
inline Rat make_rat(long num, long den) {
  Rat q(num, den);
  q.canonicalize();
  return q;
}

inline int sign(const Rat& q) { return mpq_sgn(q.get_mpq_t()); }
inline int sign(const Int& z) { return mpz_sgn(z.get_mpz_t()); }

}  // namespace omdist
