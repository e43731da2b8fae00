#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace toric {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;
using RVec = std::vector<Rational>;

/// Parses "p/q", "p", or a finite decimal such as "0.3" into an exact rational.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form ("p" when q = 1).
std::string to_string(const Rational& r);

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Exact rational value of a finite double (every double is a dyadic rational).
Rational from_double(double x);

/// Exact value of the shortest decimal that round-trips to x, so 0.3 becomes 3/10.
Rational from_decimal(double x);

Integer lcm(const Integer& a, const Integer& b);

/// Least common multiple of the denominators of all entries.
Integer denominator_lcm(const RVec& v);

/// Scales a nonzero rational vector to the primitive integer vector with the same direction.
std::vector<Integer> primitive_direction(const RVec& v);

Rational dot(const RVec& a, const RVec& b);

std::vector<double> to_double(const RVec& v);

bool lex_less(const RVec& a, const RVec& b);

}  // namespace toric
