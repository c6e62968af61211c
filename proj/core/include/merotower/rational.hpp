#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <optional>
#include <string>

namespace merotower {

/// Exact rational number. GMP keeps it canonical: gcd(|num|, den) = 1, den > 0.
using Rational = mpq_class;
using Integer = mpz_class;
using Complex = std::complex<double>;

inline double to_double(const Rational& q) { return q.get_d(); }

inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Parses "p" or "p/q"; returns nullopt on malformed input or zero denominator.
std::optional<Rational> parse_rational(const std::string& text);

/// Exact conversion of a finite double.
inline Rational from_double(double x) { return Rational(x); }

/// Best rational approximation with denominator <= max_den (continued fractions).
Rational approximate_rational(double x, const Integer& max_den);

}  // namespace merotower
