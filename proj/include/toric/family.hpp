#pragma once

#include "toric/polytope.hpp"

#include <optional>
#include <vector>

namespace toric {

/// Base polytope P with affine cuts Φ_a; P(t) = P ∩ ⋂_a {Φ_a ≥ t}.
class MovingFamily {
public:
    /// Requires every cut to be ≥ 0 on P, so that P(0) = P.
    MovingFamily(Polytope base, std::vector<AffineFunctional> cuts);

    const Polytope& base() const { return base_; }
    const std::vector<AffineFunctional>& cuts() const { return cuts_; }
    int dim() const { return base_.dim(); }

    /// min_a Φ_a(x); +∞ is not representable, so a family must have at least one cut.
    Rational min_cut(const RVec& x) const;
    double min_cut(std::span<const double> x) const;

private:
    Polytope base_;
    std::vector<AffineFunctional> cuts_;
};

/// P(t) with its facets split into the moving part N(t) and the old part ∂P⁺(t).
struct Slice {
    Rational t;
    std::optional<Polytope> polytope;  // nullopt when P(t) is empty or not full-dimensional
    /// Facet indices (into polytope->facets()) that belong to N(t), and the cut defining each.
    std::vector<int> new_facets;
    std::vector<int> new_cuts;
    /// Facet indices of ∂P⁺(t) and the base inequality defining each.
    std::vector<int> old_facets;

    bool empty() const { return !polytope.has_value(); }
};

/// The inequality list of P(t): base facets first, then Φ_a − t.
Slice slice(const MovingFamily& family, const Rational& t);

/// Γ = {(x,t) : x ∈ P, t ≥ 0, Φ_a(x) − t ≥ 0} ⊂ ℝⁿ⁺¹ with its facets classified.
struct RoofRidge {
    int face_index = 0;     // into gamma.faces(2)
    int cut_a = 0;
    int cut_b = 0;
    bool horizontal = false;
};

struct TestConfigPolytope {
    MovingFamily family;
    Polytope gamma;
    /// Facet indices into gamma.facets().
    std::vector<int> roof_facets;
    std::vector<int> roof_cuts;     // cut index of each roof facet
    std::vector<int> side_facets;
    std::vector<int> side_base;     // base inequality of each side facet
    int base_facet = -1;
    std::vector<RoofRidge> ridges;  // codimension-2 faces where two roof facets meet

    /// Lifted functionals: Φ̃_a(x,t) = Φ_a(x) − t, and (ν_a, 0) for the base facets.
    AffineFunctional roof_functional(int cut) const;
    AffineFunctional side_functional(int base_ineq) const;
    bool is_product() const { return ridges.empty(); }
};

TestConfigPolytope build_test_config(const MovingFamily& family);

/// Sorted t-values of the vertices of Γ: 0 = c₀ < c₁ < … < c_m.
std::vector<Rational> critical_values(const MovingFamily& family);
std::vector<Rational> critical_values(const TestConfigPolytope& config);

bool is_critical(const std::vector<Rational>& critical, const Rational& t);

/// Smallest positive value of Φ at a vertex of P. Φ must be ≥ 0 on P.
Rational seshadri_constant(const Polytope& p, const AffineFunctional& phi);

}  // namespace toric
