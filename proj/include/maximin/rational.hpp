#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace maximin {

// Exact rational numbers. Every probability and weight in the exact paths
// (mechanisms, decomposition, recomposition) is carried as a Rational.
using Rational = mpq_class;

// Parses "p/q", "p" or a finite decimal literal such as "0.25".
Rational parse_rational(std::string_view text);

// Canonical "p/q" form; integers are printed without a denominator.
std::string to_string(const Rational& value);

inline bool is_integer(const Rational& value) { return value.get_den() == 1; }

// Floor/ceil of a rational as a signed 64-bit integer.
long long floor_int(const Rational& value);
long long ceil_int(const Rational& value);

inline Rational to_rational(long long value) { return Rational(static_cast<long>(value)); }

// Closest fraction with denominator <= max_denominator (continued fractions).
Rational approximate(double value, long long max_denominator);

inline double to_double(const Rational& value) { return value.get_d(); }

}  // namespace maximin
