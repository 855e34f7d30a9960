#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace slicekit {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "p/q", an integer, or a decimal such as "1e-9" / "-0.25" exactly.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

inline int sign(const Rational& q) { return sgn(q); }
inline int sign(const Integer& z) { return sgn(z); }

inline Rational abs_value(const Rational& q) { return q < 0 ? Rational(-q) : q; }

/// Decimal rendering with `digits` significant digits, for human-facing output only.
std::string to_decimal(const Rational& q, int digits = 17);

}  // namespace slicekit
