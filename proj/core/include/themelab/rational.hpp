#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace themelab {

/// Exact scalar field. Values are always canonical (reduced, positive
/// denominator); every constructor path goes through canonicalize().
using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p", "-p", "p/q" (optionally with surrounding blanks).
Rational parse_rational(std::string_view text);

/// "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& q);

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

/// Requires is_integer(q) and that q fits in a long.
long to_long(const Rational& q);

/// Representative of q + Z in the half-open interval (0, 1].
Rational class_representative(const Rational& q);

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace themelab
