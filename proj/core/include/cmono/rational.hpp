#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace cmono {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

// Accepts "p", "p/q", "-p/q" and finite decimals such as "0.25" or "-1.5e-3".
Rational parse_rational(std::string_view text);

// "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& q);

double to_double(const Rational& q);

inline Rational rat(long p, long q = 1) { return Rational(p) / Rational(q); }

Rational pow(const Rational& base, unsigned exponent);

// Simplest rational (smallest denominator) in the closed interval [lo, hi], lo <= hi.
Rational simplest_between(const Rational& lo, const Rational& hi);

inline bool is_integer(const Rational& q) {
  return boost::multiprecision::denominator(q) == 1;
}

std::vector<Rational> to_rationals(const std::vector<long>& values);

}  // namespace cmono
