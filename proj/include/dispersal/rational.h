#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace dispersal {

/// Exact rational number. Arithmetic results are canonical (lowest terms, positive denominator);
/// the two-argument mpq_class constructor is not, so build fractions with `frac`.
using Rational = mpq_class;

/// num/den in lowest terms.
inline Rational frac(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// Parses "3/8", "0.125", "1e-2", "1" exactly. Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

/// Like parse_rational, additionally requiring 0 <= value <= 1.
Rational parse_probability(std::string_view text);

inline bool is_probability(const Rational& r) { return r >= 0 && r <= 1; }

/// "num/den", or "num" when the denominator is 1.
std::string to_string(const Rational& r);

/// Decimal with 12 significant digits (printf "%.12g").
std::string format_probability(double value);

double to_double(const Rational& r);

}  // namespace dispersal
