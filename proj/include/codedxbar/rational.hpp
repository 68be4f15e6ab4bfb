#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace codedxbar {

/// Exact arbitrary-precision rational. All analytical quantities (rates,
/// LP values, speedups) use this type so equalities like 5/4 are exact.
using Rational = mpq_class;

/// Parses "p/q", an integer, or a plain decimal such as "0.01" (read as
/// 1/100). Throws ParseError on anything else.
Rational parse_rational(std::string_view text);

/// Always "p/q" in lowest terms, including integers ("1/1", "0/1").
std::string to_string(const Rational& value);

double to_double(const Rational& value);

/// Least common multiple of the denominators.
mpz_class common_denominator(const std::vector<Rational>& values);

}  // namespace codedxbar
