#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace obsv {

/// Exact rational number, always canonical (lowest terms, positive denominator).
using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational make_rational(long num, long den = 1)
{
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// Parses "p", "-p", "p/q" or a finite decimal such as "0.25" exactly.
/// Returns false when the text is not one of those forms.
bool parse_rational(std::string_view text, Rational& out);

/// "3", "-1/2"
std::string to_string(const Rational& q);

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace obsv
