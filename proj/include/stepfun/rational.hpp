#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace stepfun {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational arithmetic. cpp_rational keeps values in lowest terms
// with a positive denominator, which is exactly the invariant we need.
using Rational = boost::multiprecision::cpp_rational;

/// Parses "p/q" or "p" (q > 0 after normalization). Throws std::invalid_argument.
Rational parse_rational(const std::string& text);

/// Lowest-terms "p/q", or just "p" when the denominator is 1.
std::string format_rational(const Rational& r);

}  // namespace stepfun
