#pragma once

#include <gmpxx.h>

#include <string>

namespace ergo {

// Exact rational scalar used for all measure weights and exact-mode linear
// algebra.  GMP keeps numerators/denominators canonical after every op.
using Rational = mpq_class;

// Parses "p/q" or a bare integer "p".  Throws ParseError on anything else,
// including q == 0.
Rational parse_rational(const std::string& text);

// Canonical text form: "p/q", or "p" when the denominator is 1.
std::string format_rational(const Rational& value);

inline double to_double(const Rational& value) { return value.get_d(); }

}  // namespace ergo
