#pragma once

#include "toric/polytope.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace toric {

/// Dense polynomial with exact coefficients, lowest degree first.
using RPoly = std::vector<Rational>;

/// Polynomial of degree ≤ degree through (x_i, y_i). The first degree+1 points determine it; every
/// further point must agree, otherwise nullopt.
std::optional<RPoly> interpolate(const std::vector<Rational>& x, const std::vector<Rational>& y, int degree);

Rational evaluate(const RPoly& p, const Rational& x);
RPoly derivative(const RPoly& p);
/// ∫_a^b p.
Rational integrate(const RPoly& p, const Rational& a, const Rational& b);
Rational coefficient(const RPoly& p, int degree);

/// N(kP) as an exact polynomial in k on the progression k = N, 2N, …, where N is the vertex
/// denominator (so every sampled kP is integral and the count is a genuine polynomial).
struct CountPolynomial {
    RPoly coeffs;
    Integer divisor;
    std::vector<std::int64_t> ks;
    std::vector<std::int64_t> counts;
};

/// Samples dim+1+extra levels; throws Error(Geometry) if the counts are not polynomial of degree dim.
CountPolynomial count_polynomial(const Polytope& p, int extra = 1);

}  // namespace toric
