#pragma once

#include "toric/rational.hpp"

#include <optional>
#include <vector>

namespace toric::exact {

using Matrix = std::vector<RVec>;  // row-major

/// Rank by fraction-free elimination over the rationals.
int rank(Matrix rows);

Rational determinant(Matrix a);

/// Solves the square system a·x = b; empty when a is singular.
std::optional<RVec> solve(Matrix a, RVec b);

/// Basis of the null space {x : a·x = 0}.
std::vector<RVec> null_space(const Matrix& a, int cols);

/// Affine dimension of a point set (−1 for the empty set).
int affine_dimension(const std::vector<RVec>& points);

}  // namespace toric::exact
