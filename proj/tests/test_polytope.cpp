#include "fixtures.hpp"

#include "toric/error.hpp"
#include "toric/family.hpp"

#include <doctest.h>

#include <cmath>

using namespace toric;
using fx::F;

namespace {

RVec rv(std::initializer_list<Rational> xs) { return RVec(xs); }

}  // namespace

TEST_SUITE("polytope_core") {

TEST_CASE("vertices of the square, the simplex and a sliced square") {
    CHECK(enumerate_vertices(2, fx::square().inequalities()) ==
          std::vector<RVec>{rv({0, 0}), rv({0, 1}), rv({1, 0}), rv({1, 1})});
    CHECK(enumerate_vertices(2, fx::simplex().inequalities()) == std::vector<RVec>{rv({0, 0}), rv({0, 1}), rv({1, 0})});

    auto ineqs = fx::square().inequalities();
    ineqs.push_back({rv({1, 0}), Rational(1, 4)});
    ineqs.push_back({rv({0, 1}), Rational(1, 4)});
    const Rational q(1, 4);
    CHECK(enumerate_vertices(2, ineqs) == std::vector<RVec>{rv({q, q}), rv({q, 1}), rv({1, q}), rv({1, 1})});
}

TEST_CASE("vertex enumeration rejects unbounded and empty systems") {
    CHECK_THROWS_AS(Polytope(2, {F({1, 0}, 0), F({0, 1}, 0)}), Error);
    CHECK_THROWS_AS(Polytope(1, {F({1}, 1), F({-1}, 0)}), Error);
}

TEST_CASE("every vertex is tight on at least n facets") {
    for (const auto& p : {fx::square(), fx::simplex()}) {
        for (const auto& v : p.vertices()) {
            int tight = 0;
            for (const auto& f : p.inequalities()) {
                CHECK(f(v) >= 0);
                if (f(v) == 0) ++tight;
            }
            CHECK(tight >= p.dim());
        }
    }
}

TEST_CASE("Delzant verdicts") {
    auto s = check_delzant(fx::simplex());
    CHECK(s.delzant);
    CHECK(s.integral);
    CHECK(check_delzant(fx::square()).delzant);

    Polytope tri(2, {F({1, 0}, 0), F({0, 1}, 0), F({-1, -2}, -2)});
    auto t = check_delzant(tri);
    CHECK_FALSE(t.delzant);
    bool found = false;
    for (const auto& v : t.vertices)
        if (v.vertex == rv({0, 1})) {
            CHECK(abs(v.determinant) == 2);
            CHECK_FALSE(v.ok);
            found = true;
        }
    CHECK(found);
    CHECK(t.failure.find("(0,1)") != std::string::npos);
}

TEST_CASE("non-simple vertex fails the Delzant check") {
    // Square pyramid apex: four facets meet.
    Polytope pyr(3, {F({0, 0, 1}, 0), F({1, 0, -1}, 0), F({0, 1, -1}, 0), F({-1, 0, -1}, -2), F({0, -1, -1}, -2)});
    CHECK_FALSE(check_delzant(pyr).delzant);
}

TEST_CASE("lattice counts against closed forms") {
    CHECK(count_lattice_points(fx::simplex(), 2) == 6);
    CHECK(count_lattice_points(fx::square(), 3) == 16);
    auto sl = slice(fx::square_cuts(), Rational(1, 4));
    REQUIRE(sl.polytope);
    CHECK(count_lattice_points(*sl.polytope, 4) == 16);

    Polytope tri(2, {F({1, 0}, 0), F({0, 1}, 0), F({-1, -2}, -2)});
    for (std::int64_t k = 1; k <= 12; ++k) {
        CHECK(count_lattice_points(fx::simplex(), k) == (k + 1) * (k + 2) / 2);
        CHECK(count_lattice_points(fx::square(), k) == (k + 1) * (k + 1));
        CHECK(count_lattice_points(fx::interval(), k) == k + 1);
        CHECK(count_lattice_points(tri, k) == (k + 1) * (k + 1));
    }
}

TEST_CASE("an empty dilate has no lattice points") {
    auto sl = slice(fx::square_cuts(), Rational(1, 3));
    REQUIRE(sl.polytope);
    CHECK(count_lattice_points(*sl.polytope, 1) == 1);  // only (1,1)
    Polytope thin(1, {F({3}, 1), F({-3}, -2)});           // [1/3, 2/3]
    CHECK(count_lattice_points(thin, 1) == 0);
}

TEST_CASE("Leray densities") {
    CHECK(leray_facet_density(F({1, 0}, 0)) == doctest::Approx(1.0));
    CHECK(leray_facet_density({rv({1, 1}), Rational(1, 4)}) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(leray_facet_density(F({-1, -2}, -2)) == doctest::Approx(1.0 / std::sqrt(5.0)));
    CHECK_THROWS_AS(leray_facet_density(F({0, 0}, 1)), Error);

    CHECK(leray_codim2_density(F({1, 0}, 0), F({0, 1}, 0)) == doctest::Approx(1.0));
    CHECK(leray_codim2_density(F({1, -1}, 0), F({-1, -1}, -1)) == doctest::Approx(0.5));
    CHECK(leray_codim2_density(F({1, 0}, 0), F({1, 1}, 0)) == doctest::Approx(1.0));
    CHECK_THROWS_AS(leray_codim2_density(F({1, 1}, 0), F({2, 2}, 1)), Error);
}

TEST_CASE("Leray volumes satisfy dsigma dl = dx") {
    // Vol{0 <= x1 + x2 <= h} ∩ square for small h equals h · (Leray length of x1 + x2 = 0 ∩ square) to first
    // order; here the exact Leray volume of the simplex hypotenuse is 1 (primitive normal).
    const auto p = fx::simplex();
    Rational total = 0;
    for (const auto& f : p.facets()) total += p.lattice_facet_volume(f);
    CHECK(total == 3);
    CHECK(p.lattice_boundary_volume() == 3);
    CHECK(fx::square().lattice_boundary_volume() == 4);
}

TEST_CASE("slices") {
    auto s = slice(fx::square_cuts(), Rational(1, 4));
    REQUIRE(s.polytope);
    CHECK(s.new_facets.size() == 2);
    CHECK(s.old_facets.size() == 2);
    CHECK(s.polytope->volume() == Rational(9, 16));

    auto s0 = slice(fx::cp2_vertex(), 0);
    REQUIRE(s0.polytope);
    CHECK(s0.new_facets.empty());
    CHECK(s0.polytope->vertices() == fx::simplex().vertices());

    CHECK(slice(fx::tent(), Rational(3, 4)).empty());
}

TEST_CASE("critical values") {
    CHECK(critical_values(fx::tent()) == std::vector<Rational>{0, Rational(1, 2)});
    CHECK(critical_values(fx::cp2_vertex()) == std::vector<Rational>{0, 1});
    CHECK(critical_values(fx::square_cuts()) == std::vector<Rational>{0, 1});
}

TEST_CASE("slice combinatorics are constant between critical values") {
    for (const auto& fam : {fx::square_cuts(), fx::cp2_vertex(), fx::tent()}) {
        const auto c = critical_values(fam);
        for (std::size_t i = 0; i + 1 < c.size(); ++i) {
            std::vector<std::size_t> shape;
            for (int q = 1; q <= 3; ++q) {
                auto s = slice(fam, c[i] + (c[i + 1] - c[i]) * q / 4);
                REQUIRE(s.polytope);
                const std::vector<std::size_t> here{s.new_facets.size(), s.old_facets.size(), s.polytope->vertices().size()};
                if (shape.empty()) shape = here;
                CHECK(here == shape);
            }
        }
    }
}

TEST_CASE("Seshadri constants") {
    CHECK(seshadri_constant(fx::simplex(), F({1, 1}, 0)) == 1);
    CHECK(seshadri_constant(fx::square(), F({1, 0}, 0)) == 1);
    CHECK(seshadri_constant(fx::square(), F({1, 1}, 0)) == 1);
    CHECK_THROWS_AS(seshadri_constant(fx::square(), F({1, 0}, 1)), Error);
}

TEST_CASE("test configuration of the tent") {
    auto cfg = build_test_config(fx::tent());
    const Rational h(1, 2);
    CHECK(cfg.gamma.vertices() == std::vector<RVec>{rv({0, 0}), rv({h, h}), rv({1, 0})});
    CHECK(cfg.roof_facets.size() == 2);
    CHECK(cfg.side_facets.empty());
    REQUIRE(cfg.ridges.size() == 1);
    CHECK(cfg.ridges[0].horizontal);
    CHECK_FALSE(cfg.is_product());
}

TEST_CASE("product configurations") {
    auto simplex3 = build_test_config(fx::cp2_product());
    CHECK(simplex3.gamma.vertices().size() == 4);
    CHECK(simplex3.gamma.volume() == Rational(1, 6));
    CHECK(simplex3.is_product());

    auto pr = build_test_config(fx::prism());
    CHECK(pr.gamma.vertices().size() == 4);
    CHECK(pr.is_product());
    CHECK(pr.roof_facets.size() == 1);
    CHECK(pr.side_facets.size() == 2);
}

TEST_CASE("facets of Gamma are roof, side or base") {
    for (const auto& fam : {fx::tent(), fx::square_cuts(), fx::cp2_vertex(), fx::prism()}) {
        auto cfg = build_test_config(fam);
        const std::size_t classified = cfg.roof_facets.size() + cfg.side_facets.size() + (cfg.base_facet >= 0 ? 1 : 0);
        CHECK(classified == cfg.gamma.facets().size());
    }
}

TEST_CASE("codimension-2 faces lie on exactly two facets") {
    for (const auto& fam : {fx::tent(), fx::square_cuts(), fx::cp2_vertex(), fx::cp2_product()}) {
        auto cfg = build_test_config(fam);
        for (const auto& face : cfg.gamma.faces(2)) CHECK(face.active_facets.size() == 2);
    }
    for (const auto& face : fx::square().faces(2)) CHECK(face.active_facets.size() == 2);
}

TEST_CASE("prism counts: N(k Gamma) - N(kP) = kc N(kP)") {
    auto cfg = build_test_config(fx::prism());
    for (std::int64_t k = 1; k <= 10; ++k) {
        const auto d = count_lattice_points(fx::interval(), k);
        CHECK(count_lattice_points(cfg.gamma, k) - d == k * 1 * d);
    }
}

TEST_CASE("cuts must be nonnegative on P and Gamma must be bounded") {
    CHECK_THROWS_AS(MovingFamily(fx::interval(), {F({1}, 1)}), Error);
    CHECK_THROWS_AS(build_test_config(MovingFamily(fx::interval(), {F({0}, 0)})), Error);
}

}

TEST_SUITE("polytope_core") {

TEST_CASE("rational parsing") {
    CHECK(parse_rational("3/10") == Rational(3, 10));
    CHECK(parse_rational("0.08") == Rational(2, 25));
    CHECK(parse_rational("0.8") == Rational(4, 5));
    CHECK(parse_rational("007") == 7);
    CHECK(parse_rational("-1.5e-1") == Rational(-3, 20));
    CHECK(parse_rational("0") == 0);
    CHECK(parse_rational("0.000") == 0);
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational("x"), Error);
    CHECK(from_decimal(0.3) == Rational(3, 10));
    CHECK(from_double(0.5) == Rational(1, 2));
    CHECK(from_double(0.3) != Rational(3, 10));
    CHECK(to_string(Rational(-6, 4)) == "-3/2");
}

}
