#pragma once

#include "toric/family.hpp"
#include "toric/potential.hpp"

#include <memory>
#include <vector>

namespace fx {

inline toric::AffineFunctional F(std::vector<long> normal, long offset) {
    return toric::AffineFunctional::from_ints(std::move(normal), offset);
}

inline toric::Polytope interval() { return toric::Polytope(1, {F({1}, 0), F({-1}, -1)}); }
inline toric::Polytope simplex() { return toric::Polytope(2, {F({1, 0}, 0), F({0, 1}, 0), F({-1, -1}, -1)}); }
inline toric::Polytope square() {
    return toric::Polytope(2, {F({1, 0}, 0), F({0, 1}, 0), F({-1, 0}, -1), F({0, -1}, -1)});
}

inline toric::MovingFamily tent() { return toric::MovingFamily(interval(), {F({1}, 0), F({-1}, -1)}); }
inline toric::MovingFamily cp1_cut() { return toric::MovingFamily(interval(), {F({1}, 0)}); }
inline toric::MovingFamily prism() { return toric::MovingFamily(interval(), {F({0}, -1)}); }
inline toric::MovingFamily cp2_vertex() { return toric::MovingFamily(simplex(), {F({1, 1}, 0)}); }
inline toric::MovingFamily cp2_product() { return toric::MovingFamily(simplex(), {F({-1, -1}, -1)}); }
inline toric::MovingFamily square_cuts() { return toric::MovingFamily(square(), {F({1, 0}, 0), F({0, 1}, 0)}); }

inline std::shared_ptr<const toric::SymplecticPotential> guillemin(const toric::Polytope& p) {
    return std::make_shared<const toric::SymplecticPotential>(p);
}

}  // namespace fx
