#pragma once

// Exact rational scalar used throughout the library, plus its "p/q" text form.

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>

namespace kserver {

// Expression templates are off so that `auto` and `?:` always yield values.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;

/// Parses "p/q", "p" or a plain decimal integer. Throws kserver::Error(Parse) on bad input
/// or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical GMP form: "p/q" in lowest terms, integers without a denominator.
std::string format_rational(const Rational& value);

/// The exact rational equal to a finite double.
Rational rational_from_double(double value);

inline Rational half(const Rational& value) { return value / 2; }

}  // namespace kserver
