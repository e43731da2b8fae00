#pragma once

#include "toric/rational.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace toric {

/// Affine function ℓ(x) = ⟨x, ν⟩ − λ. Polytopes are written as {ℓ_a ≥ 0}.
struct AffineFunctional {
    RVec normal;
    Rational offset;

    AffineFunctional() = default;
    AffineFunctional(RVec nu, Rational lambda) : normal(std::move(nu)), offset(std::move(lambda)) {}

    static AffineFunctional from_ints(std::vector<long> nu, long lambda);

    int dim() const { return static_cast<int>(normal.size()); }
    bool is_constant() const;

    Rational operator()(const RVec& x) const { return dot(normal, x) - offset; }
    double operator()(std::span<const double> x) const;

    std::vector<double> gradient() const { return to_double(normal); }

    /// ℓ − t.
    AffineFunctional shifted(const Rational& t) const { return {normal, offset + t}; }

    /// Same hyperplane and half-space with the normal rescaled to a primitive integer vector.
    AffineFunctional primitive() const;

    bool operator==(const AffineFunctional&) const = default;
};

/// A face of a polytope, identified by the vertices it contains.
struct Face {
    std::vector<int> vertices;        // indices into Polytope::vertices()
    std::vector<int> active_facets;   // representative inequality index of every facet containing the face
    int codim = 0;
    std::vector<RVec> affine_basis;   // primitive integer tangent directions
};

/// Rational simplex given by its vertices (d+1 points of R^m).
using Simplex = std::vector<RVec>;

/// Bounded, full-dimensional convex polytope {x : ℓ_a(x) ≥ 0} with exact vertices and faces.
///
/// The inequality list may contain redundant rows and repeated hyperplanes. Each geometric
/// facet is represented by the first inequality (lowest index) that cuts it out.
class Polytope {
public:
    /// Throws Error(Geometry) when the system is empty, unbounded, or not full-dimensional.
    Polytope(int dim, std::vector<AffineFunctional> inequalities);

    /// Like the constructor, but returns nullopt for an empty or lower-dimensional set.
    /// Unboundedness is still an error.
    static std::optional<Polytope> make_if_full(int dim, std::vector<AffineFunctional> inequalities);

    int dim() const { return dim_; }
    const std::vector<AffineFunctional>& inequalities() const { return ineqs_; }
    const std::vector<RVec>& vertices() const { return vertices_; }

    /// Codimension-1 faces. `active_facets` holds the single representative inequality.
    const std::vector<Face>& facets() const { return faces_.at(1); }
    /// Faces of the given codimension (1..dim; codim = dim gives the vertices).
    const std::vector<Face>& faces(int codim) const { return faces_.at(codim); }
    /// The whole polytope as a codimension-0 face.
    const Face& body() const { return faces_.at(0).front(); }

    /// Index into facets() of the facet represented by inequality i, or −1.
    int facet_of_inequality(int i) const;

    bool contains(const RVec& x) const;
    bool contains_interior(const RVec& x) const;

    RVec centroid() const;
    Rational volume() const;

    /// Centroid-fan triangulation of the polytope (or of one of its faces).
    std::vector<Simplex> triangulate() const { return triangulate(body()); }
    std::vector<Simplex> triangulate(const Face& face) const;

    /// Exact measure of a face of codimension q in the Leray form defined by q functionals
    /// (dσ dℓ_1 … dℓ_q = dx). The functionals must vanish on the face.
    Rational leray_volume(const Face& face, const std::vector<AffineFunctional>& cut_by) const;

    /// Leray volume of the facet w.r.t. its primitive conormal (the lattice boundary measure).
    Rational lattice_facet_volume(const Face& facet) const;

    /// Σ over facets of lattice_facet_volume.
    Rational lattice_boundary_volume() const;

    /// Lattice points of kP, i.e. ℤⁿ ∩ kP (not rescaled).
    std::vector<std::vector<std::int64_t>> lattice_points(std::int64_t k) const;

    /// Smallest N ≥ 1 such that N·P has integral vertices.
    Integer vertex_denominator() const;

private:
    Polytope() = default;
    static std::optional<Polytope> build(int dim, std::vector<AffineFunctional> ineqs, bool strict);
    void build_faces();
    std::vector<int> tight_vertices(const AffineFunctional& l) const;

    int dim_ = 0;
    std::vector<AffineFunctional> ineqs_;
    std::vector<RVec> vertices_;
    std::vector<std::vector<Face>> faces_;  // by codimension 0..dim
};

/// All points satisfying every inequality and lying on n independent equalities:
/// deduplicated and lexicographically sorted.
std::vector<RVec> enumerate_vertices(int dim, const std::vector<AffineFunctional>& facets);

struct VertexCertificate {
    RVec vertex;
    std::vector<int> active_facets;
    std::vector<std::vector<Integer>> edge_directions;  // primitive
    Integer determinant;
    bool ok = false;
    std::string reason;
};

struct DelzantVerdict {
    bool delzant = false;
    bool integral = false;   // every facet offset λ_a is an integer (with primitive normals)
    std::vector<VertexCertificate> vertices;
    std::string failure;     // first failing vertex, if any
};

DelzantVerdict check_delzant(const Polytope& p);

/// |ℤⁿ ∩ kP| by integer bounding box and membership test.
std::int64_t count_lattice_points(const Polytope& p, std::int64_t k);

/// 1/‖∇ℓ‖: converts Euclidean (n−1)-measure on {ℓ = 0} into the Leray form dσ (dσ dℓ = dx).
double leray_facet_density(const AffineFunctional& l);

/// 1/√det Gram(∇ℓ_a, ∇ℓ_b): converts Euclidean (n−2)-measure on {ℓ_a = ℓ_b = 0} into dτ_ab.
double leray_codim2_density(const AffineFunctional& a, const AffineFunctional& b);

}  // namespace toric
