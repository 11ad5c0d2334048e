#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

namespace diffalg {

// Arbitrary-precision exact rationals. Every coefficient in the library is
// one of these; there is no floating point anywhere in the kernel.
using Integer  = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

// "p" when the denominator is 1, otherwise "p/q".
std::string to_string(const Rational& r);

// base^exp for integer exp of either sign. Negative exp of zero throws
// DivisionByZero.
Rational pow_integer(const Rational& base, const Integer& exp);

// Exact base^(p/q) when it exists in the rationals (q-th root of both
// numerator and denominator must be exact integers), nullopt otherwise.
std::optional<Rational> pow_rational_exact(const Rational& base, const Rational& exp);

// Exact n-th root of a nonnegative integer, nullopt if not a perfect power.
std::optional<Integer> nth_root_exact(const Integer& value, unsigned n);

}  // namespace diffalg
