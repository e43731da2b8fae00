#include "toric/polytope.hpp"

#include "toric/error.hpp"
#include "toric/exact_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace toric {

namespace {

constexpr const char* kModule = "polytope_core";

// Calls fn(indices) for every k-subset of {0..n-1} in lexicographic order.
template <class Fn>
void for_each_subset(int n, int k, Fn&& fn) {
    if (k > n || k < 0) return;
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        fn(static_cast<const std::vector<int>&>(idx));
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

bool is_subset(const std::vector<int>& small, const std::vector<int>& big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

Rational factorial(int d) {
    Rational f = 1;
    for (int i = 2; i <= d; ++i) f *= i;
    return f;
}

std::vector<RVec> points_of(const std::vector<RVec>& all, const std::vector<int>& idx) {
    std::vector<RVec> pts;
    pts.reserve(idx.size());
    for (int i : idx) pts.push_back(all[i]);
    return pts;
}

RVec to_rvec(const std::vector<Integer>& v) {
    RVec r;
    r.reserve(v.size());
    for (const auto& x : v) r.emplace_back(x);
    return r;
}

// Volume of the simplex after keeping only coordinates `keep`.
Rational projected_volume(const Simplex& s, const std::vector<int>& keep) {
    const int d = static_cast<int>(keep.size());
    if (d == 0) return 1;
    exact::Matrix m;
    for (int i = 1; i <= d; ++i) {
        RVec row;
        for (int c : keep) row.push_back(s[i][c] - s[0][c]);
        m.push_back(std::move(row));
    }
    Rational det = exact::determinant(std::move(m));
    return abs(det) / factorial(d);
}

}  // namespace

// ---------------------------------------------------------------------------
// AffineFunctional

AffineFunctional AffineFunctional::from_ints(std::vector<long> nu, long lambda) {
    RVec n;
    for (long v : nu) n.emplace_back(v);
    return {std::move(n), Rational(lambda)};
}

bool AffineFunctional::is_constant() const {
    return std::all_of(normal.begin(), normal.end(), [](const Rational& r) { return r == 0; });
}

double AffineFunctional::operator()(std::span<const double> x) const {
    double s = -to_double(offset);
    for (std::size_t i = 0; i < normal.size(); ++i) s += to_double(normal[i]) * x[i];
    return s;
}

AffineFunctional AffineFunctional::primitive() const {
    if (is_constant()) fail(ErrorKind::Precondition, kModule, "primitive form of a constant functional");
    auto prim = primitive_direction(normal);
    // Find the positive scale s with s·normal = prim.
    std::size_t j = 0;
    while (normal[j] == 0) ++j;
    Rational scale = Rational(prim[j]) / normal[j];
    return {to_rvec(prim), offset * scale};
}

// ---------------------------------------------------------------------------
// Vertex enumeration

std::vector<RVec> enumerate_vertices(int dim, const std::vector<AffineFunctional>& facets) {
    std::set<RVec, decltype(&lex_less)> found(&lex_less);
    const int m = static_cast<int>(facets.size());
    for_each_subset(m, dim, [&](const std::vector<int>& rows) {
        exact::Matrix a;
        RVec b;
        for (int r : rows) {
            a.push_back(facets[r].normal);
            b.push_back(facets[r].offset);
        }
        auto x = exact::solve(std::move(a), std::move(b));
        if (!x) return;
        for (const auto& f : facets)
            if (f(*x) < 0) return;
        found.insert(std::move(*x));
    });
    return {found.begin(), found.end()};
}

// ---------------------------------------------------------------------------
// Polytope

std::optional<Polytope> Polytope::build(int dim, std::vector<AffineFunctional> ineqs, bool strict) {
    if (dim < 1) fail(ErrorKind::Precondition, kModule, "dimension must be positive");
    for (const auto& f : ineqs)
        if (f.dim() != dim) fail(ErrorKind::Precondition, kModule, "functional has the wrong dimension");

    exact::Matrix normals;
    for (const auto& f : ineqs) normals.push_back(f.normal);
    if (exact::rank(normals) < dim)
        fail(ErrorKind::Geometry, kModule, "unbounded: facet normals do not span R^" + std::to_string(dim));

    Polytope p;
    p.dim_ = dim;
    p.ineqs_ = std::move(ineqs);
    p.vertices_ = enumerate_vertices(dim, p.ineqs_);
    if (p.vertices_.empty()) {
        if (strict) fail(ErrorKind::Geometry, kModule, "empty: the inequalities have no common solution");
        return std::nullopt;
    }

    // A pointed polyhedron is bounded iff it has no extreme ray; every extreme ray is cut out
    // by n−1 independent normals.
    const int m = static_cast<int>(p.ineqs_.size());
    bool unbounded = false;
    for_each_subset(m, dim - 1, [&](const std::vector<int>& rows) {
        if (unbounded) return;
        exact::Matrix a;
        for (int r : rows) a.push_back(p.ineqs_[r].normal);
        auto ns = exact::null_space(a, dim);
        if (ns.size() != 1) return;
        for (int sign : {1, -1}) {
            bool ray = true;
            for (const auto& f : p.ineqs_) {
                if (sign * dot(f.normal, ns[0]) < 0) {
                    ray = false;
                    break;
                }
            }
            if (ray) unbounded = true;
        }
    });
    if (unbounded) fail(ErrorKind::Geometry, kModule, "unbounded: the inequalities admit a recession ray");

    if (exact::affine_dimension(p.vertices_) < dim) {
        if (strict)
            fail(ErrorKind::Geometry, kModule,
                 "not full-dimensional: vertices span a lower-dimensional affine subspace");
        return std::nullopt;
    }
    p.build_faces();
    return p;
}

Polytope::Polytope(int dim, std::vector<AffineFunctional> inequalities) {
    *this = *build(dim, std::move(inequalities), true);
}

std::optional<Polytope> Polytope::make_if_full(int dim, std::vector<AffineFunctional> inequalities) {
    return build(dim, std::move(inequalities), false);
}

std::vector<int> Polytope::tight_vertices(const AffineFunctional& l) const {
    std::vector<int> out;
    for (int v = 0; v < static_cast<int>(vertices_.size()); ++v)
        if (l(vertices_[v]) == 0) out.push_back(v);
    return out;
}

void Polytope::build_faces() {
    faces_.assign(dim_ + 1, {});
    Face whole;
    whole.vertices.resize(vertices_.size());
    std::iota(whole.vertices.begin(), whole.vertices.end(), 0);
    whole.codim = 0;
    faces_[0].push_back(whole);

    std::set<std::vector<int>> seen;
    for (int i = 0; i < static_cast<int>(ineqs_.size()); ++i) {
        if (ineqs_[i].is_constant()) continue;
        auto tight = tight_vertices(ineqs_[i]);
        if (seen.count(tight)) continue;
        if (exact::affine_dimension(points_of(vertices_, tight)) != dim_ - 1) continue;
        seen.insert(tight);
        Face f;
        f.vertices = std::move(tight);
        f.active_facets = {i};
        f.codim = 1;
        faces_[1].push_back(std::move(f));
    }

    for (int c = 2; c <= dim_; ++c) {
        std::set<std::vector<int>> seen_c;
        for (const auto& upper : faces_[c - 1]) {
            for (const auto& facet : faces_[1]) {
                if (is_subset(upper.vertices, facet.vertices)) continue;
                std::vector<int> common;
                std::set_intersection(upper.vertices.begin(), upper.vertices.end(), facet.vertices.begin(),
                                      facet.vertices.end(), std::back_inserter(common));
                if (common.empty() || seen_c.count(common)) continue;
                if (exact::affine_dimension(points_of(vertices_, common)) != dim_ - c) continue;
                seen_c.insert(common);
                Face f;
                f.vertices = std::move(common);
                f.codim = c;
                faces_[c].push_back(std::move(f));
            }
        }
        std::sort(faces_[c].begin(), faces_[c].end(),
                  [](const Face& a, const Face& b) { return a.vertices < b.vertices; });
    }

    for (int c = 1; c <= dim_; ++c) {
        for (auto& f : faces_[c]) {
            if (c > 1) {
                f.active_facets.clear();
                for (const auto& facet : faces_[1])
                    if (is_subset(f.vertices, facet.vertices)) f.active_facets.push_back(facet.active_facets[0]);
            }
        }
    }

    for (auto& level : faces_) {
        for (auto& f : level) {
            exact::Matrix diffs;
            for (std::size_t i = 1; i < f.vertices.size(); ++i) {
                RVec d(dim_);
                for (int j = 0; j < dim_; ++j) d[j] = vertices_[f.vertices[i]][j] - vertices_[f.vertices[0]][j];
                exact::Matrix trial = diffs;
                trial.push_back(d);
                if (exact::rank(trial) > static_cast<int>(diffs.size())) diffs.push_back(std::move(d));
            }
            f.affine_basis.clear();
            for (const auto& d : diffs) f.affine_basis.push_back(to_rvec(primitive_direction(d)));
        }
    }
}

int Polytope::facet_of_inequality(int i) const {
    const auto& fs = facets();
    for (int f = 0; f < static_cast<int>(fs.size()); ++f)
        if (fs[f].active_facets[0] == i) return f;
    return -1;
}

bool Polytope::contains(const RVec& x) const {
    return std::all_of(ineqs_.begin(), ineqs_.end(), [&](const AffineFunctional& f) { return f(x) >= 0; });
}

bool Polytope::contains_interior(const RVec& x) const {
    for (const auto& facet : facets())
        if (ineqs_[facet.active_facets[0]](x) <= 0) return false;
    return contains(x);
}

RVec Polytope::centroid() const {
    RVec c(dim_, Rational(0));
    for (const auto& v : vertices_)
        for (int j = 0; j < dim_; ++j) c[j] += v[j];
    for (auto& x : c) x /= static_cast<long>(vertices_.size());
    return c;
}

std::vector<Simplex> Polytope::triangulate(const Face& face) const {
    const int d = dim_ - face.codim;
    if (d == 0) return {Simplex{vertices_[face.vertices.front()]}};
    if (d == 1) return {Simplex{vertices_[face.vertices[0]], vertices_[face.vertices[1]]}};

    RVec apex(dim_, Rational(0));
    for (int v : face.vertices)
        for (int j = 0; j < dim_; ++j) apex[j] += vertices_[v][j];
    for (auto& x : apex) x /= static_cast<long>(face.vertices.size());

    std::vector<Simplex> out;
    for (const auto& sub : faces_[face.codim + 1]) {
        if (!is_subset(sub.vertices, face.vertices)) continue;
        for (auto& s : triangulate(sub)) {
            s.insert(s.begin(), apex);
            out.push_back(std::move(s));
        }
    }
    return out;
}

Rational Polytope::volume() const {
    Rational v = 0;
    std::vector<int> all(dim_);
    std::iota(all.begin(), all.end(), 0);
    for (const auto& s : triangulate()) v += projected_volume(s, all);
    return v;
}

Rational Polytope::leray_volume(const Face& face, const std::vector<AffineFunctional>& cut_by) const {
    const int q = static_cast<int>(cut_by.size());
    if (q != face.codim)
        fail(ErrorKind::Precondition, kModule, "Leray volume needs one functional per codimension");
    for (const auto& l : cut_by)
        for (int v : face.vertices)
            if (l(vertices_[v]) != 0)
                fail(ErrorKind::Precondition, kModule, "Leray functional does not vanish on the face");

    // Pick q coordinates with a nonzero minor; dσ = dx_rest / |minor|.
    std::vector<int> chosen;
    Rational minor = 0;
    for_each_subset(dim_, q, [&](const std::vector<int>& cols) {
        if (!chosen.empty()) return;
        exact::Matrix m;
        for (const auto& l : cut_by) {
            RVec row;
            for (int c : cols) row.push_back(l.normal[c]);
            m.push_back(std::move(row));
        }
        Rational det = exact::determinant(std::move(m));
        if (det != 0) {
            chosen = cols;
            minor = abs(det);
        }
    });
    if (chosen.empty()) fail(ErrorKind::Precondition, kModule, "Leray functionals are linearly dependent");

    std::vector<int> keep;
    for (int c = 0; c < dim_; ++c)
        if (!std::binary_search(chosen.begin(), chosen.end(), c)) keep.push_back(c);

    Rational total = 0;
    for (const auto& s : triangulate(face)) total += projected_volume(s, keep);
    return total / minor;
}

Rational Polytope::lattice_facet_volume(const Face& facet) const {
    return leray_volume(facet, {ineqs_[facet.active_facets.at(0)].primitive()});
}

Rational Polytope::lattice_boundary_volume() const {
    Rational total = 0;
    for (const auto& f : facets()) total += lattice_facet_volume(f);
    return total;
}

std::vector<std::vector<std::int64_t>> Polytope::lattice_points(std::int64_t k) const {
    struct Row {
        std::vector<std::int64_t> a;
        std::int64_t b;
    };
    std::vector<Row> rows;
    for (const auto& f : ineqs_) {
        RVec all = f.normal;
        all.push_back(f.offset);
        Integer d = denominator_lcm(all);
        Row r;
        for (const auto& x : f.normal) r.a.push_back((numerator(x) * (d / denominator(x))).convert_to<std::int64_t>());
        r.b = (numerator(f.offset) * (d / denominator(f.offset))).convert_to<std::int64_t>();
        rows.push_back(std::move(r));
    }

    std::vector<std::int64_t> lo(dim_), hi(dim_);
    for (int j = 0; j < dim_; ++j) {
        Rational mn = vertices_[0][j], mx = vertices_[0][j];
        for (const auto& v : vertices_) {
            mn = std::min(mn, v[j]);
            mx = std::max(mx, v[j]);
        }
        Rational klo = mn * k, khi = mx * k;
        // floor / ceil of rationals
        Integer fl = numerator(klo) / denominator(klo);
        if (fl * denominator(klo) > numerator(klo)) fl -= 1;
        Integer cl = numerator(khi) / denominator(khi);
        if (cl * denominator(khi) < numerator(khi)) cl += 1;
        lo[j] = fl.convert_to<std::int64_t>();
        hi[j] = cl.convert_to<std::int64_t>();
    }

    std::vector<std::vector<std::int64_t>> out;
    std::vector<std::int64_t> beta = lo;
    while (true) {
        bool inside = true;
        for (const auto& r : rows) {
            std::int64_t s = 0;
            for (int j = 0; j < dim_; ++j) s += r.a[j] * beta[j];
            if (s < k * r.b) {
                inside = false;
                break;
            }
        }
        if (inside) out.push_back(beta);
        int j = dim_ - 1;
        while (j >= 0 && beta[j] == hi[j]) {
            beta[j] = lo[j];
            --j;
        }
        if (j < 0) break;
        ++beta[j];
    }
    return out;
}

Integer Polytope::vertex_denominator() const {
    Integer d = 1;
    for (const auto& v : vertices_) d = lcm(d, denominator_lcm(v));
    return d;
}

// ---------------------------------------------------------------------------
// Delzant check and counting

DelzantVerdict check_delzant(const Polytope& p) {
    DelzantVerdict verdict;
    verdict.delzant = true;
    const int n = p.dim();

    verdict.integral = true;
    for (const auto& f : p.facets()) {
        auto prim = p.inequalities()[f.active_facets[0]].primitive();
        if (denominator(prim.offset) != 1) verdict.integral = false;
    }

    for (int v = 0; v < static_cast<int>(p.vertices().size()); ++v) {
        VertexCertificate cert;
        cert.vertex = p.vertices()[v];
        for (const auto& f : p.facets())
            if (std::binary_search(f.vertices.begin(), f.vertices.end(), v)) cert.active_facets.push_back(f.active_facets[0]);

        for (const auto& edge : p.faces(n - 1)) {
            if (!std::binary_search(edge.vertices.begin(), edge.vertices.end(), v)) continue;
            int other = edge.vertices[0] == v ? edge.vertices[1] : edge.vertices[0];
            RVec d(n);
            for (int j = 0; j < n; ++j) d[j] = p.vertices()[other][j] - cert.vertex[j];
            cert.edge_directions.push_back(primitive_direction(d));
        }

        if (static_cast<int>(cert.active_facets.size()) != n) {
            cert.reason = "non-simple vertex: " + std::to_string(cert.active_facets.size()) + " facets meet";
        } else if (static_cast<int>(cert.edge_directions.size()) != n) {
            cert.reason = std::to_string(cert.edge_directions.size()) + " edges meet";
        } else {
            exact::Matrix m;
            for (const auto& e : cert.edge_directions) m.push_back(to_rvec(e));
            Rational det = exact::determinant(std::move(m));
            cert.determinant = numerator(det);
            cert.ok = abs(det) == 1;
            if (!cert.ok) cert.reason = "edge-direction determinant " + cert.determinant.str();
        }
        if (!cert.ok && verdict.delzant) {
            verdict.delzant = false;
            std::string where = "(";
            for (int j = 0; j < n; ++j) where += (j ? "," : "") + to_string(cert.vertex[j]);
            verdict.failure = "vertex " + where + "): " + cert.reason;
        }
        verdict.vertices.push_back(std::move(cert));
    }
    return verdict;
}

std::int64_t count_lattice_points(const Polytope& p, std::int64_t k) {
    if (k < 1) fail(ErrorKind::Precondition, kModule, "k must be positive");
    return static_cast<std::int64_t>(p.lattice_points(k).size());
}

double leray_facet_density(const AffineFunctional& l) {
    double s = 0;
    for (double g : l.gradient()) s += g * g;
    if (s == 0) fail(ErrorKind::Precondition, kModule, "Leray density of a functional with zero normal");
    return 1.0 / std::sqrt(s);
}

double leray_codim2_density(const AffineFunctional& a, const AffineFunctional& b) {
    Rational aa = dot(a.normal, a.normal), bb = dot(b.normal, b.normal), ab = dot(a.normal, b.normal);
    Rational gram = aa * bb - ab * ab;
    if (gram == 0) fail(ErrorKind::Precondition, kModule, "parallel gradients: no codimension-2 face");
    return 1.0 / std::sqrt(to_double(gram));
}

}  // namespace toric
