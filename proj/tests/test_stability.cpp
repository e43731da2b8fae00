#include "fixtures.hpp"

#include "toric/error.hpp"
#include "toric/stability.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace toric;

TEST_SUITE("stability") {

TEST_CASE("Hilbert coefficients of the CP2 vertex family") {
    const auto fam = fx::cp2_vertex();
    for (Rational t : {Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4)}) {
        auto h = hilbert_coeffs_combinatorial(fam, t);
        CHECK(h.A0 == (1 - t * t) / 2);
        CHECK(h.A1 == (3 - t) / 2);
        auto s = slice(fam, t);
        CHECK(h.A0 == s.polytope->volume());
    }
    auto h0 = hilbert_coeffs_combinatorial(fam, 0);
    CHECK(h0.A0 == Rational(1, 2));
    CHECK(h0.A1 == Rational(3, 2));
}

TEST_CASE("Hilbert coefficients of the square family") {
    for (Rational t : {Rational(1, 4), Rational(1, 3), Rational(2, 3)}) {
        auto h = hilbert_coeffs_combinatorial(fx::square_cuts(), t);
        CHECK(h.A0 == (1 - t) * (1 - t));
        CHECK(h.A1 == 2 * (1 - t));
        CHECK(h.counts.divisor == denominator(t));
    }
}

TEST_CASE("geometric Hilbert coefficients agree with lattice counts") {
    AsymptoticsOptions opt;
    SymplecticPotential sq(fx::square());
    SymplecticPotential cp2(fx::simplex());
    for (Rational t : {Rational(1, 4), Rational(1, 2)}) {
        auto g = hilbert_coeffs_geometric(fx::square_cuts(), sq, t, opt);
        auto c = hilbert_coeffs_combinatorial(fx::square_cuts(), t);
        CHECK(g.A0 == doctest::Approx(to_double(c.A0)).epsilon(1e-10));
        CHECK(g.A1 == doctest::Approx(to_double(c.A1)).epsilon(1e-6));
        auto g2 = hilbert_coeffs_geometric(fx::cp2_vertex(), cp2, t, opt);
        auto c2 = hilbert_coeffs_combinatorial(fx::cp2_vertex(), t);
        CHECK(g2.A1 == doctest::Approx(to_double(c2.A1)).epsilon(1e-6));
    }
}

TEST_CASE("slope of the polarized variety") {
    CHECK(slope_mu(fx::interval()) == 1);
    CHECK(slope_mu(fx::simplex()) == 3);
    CHECK(slope_mu(fx::square()) == 2);
    CHECK(std::abs(0.5 * average_scalar_curvature(SymplecticPotential(fx::interval())) - 1) < 1e-6);
    CHECK(std::abs(0.5 * average_scalar_curvature(SymplecticPotential(fx::simplex())) - 3) < 1e-6);
    CHECK(std::abs(0.5 * average_scalar_curvature(SymplecticPotential(fx::square())) - 2) < 1e-6);
    // For a non-constant s the identity still holds: ∫ s is fixed by the boundary.
    SymplecticPotential pert(fx::simplex(), Polynomial(2, {{{2, 1}, 0.05}, {{1, 1}, -0.03}}));
    CHECK(std::abs(0.5 * average_scalar_curvature(pert) - 3) < 1e-6);
}

TEST_CASE("slope of the CP2 vertex family") {
    const auto fam = fx::cp2_vertex();
    auto h = hilbert_functions(fam);
    REQUIRE(h.A0.size() == 1);
    for (Rational t : {Rational(0), Rational(1, 3), Rational(5, 7)}) {
        CHECK(evaluate(h.A0[0], t) == (1 - t * t) / 2);
        CHECK(evaluate(h.A1[0], t) == (3 - t) / 2);
    }
    for (int num = 1; num <= 8; ++num) {
        const Rational c(num, 8);
        CHECK(slope_mu_c(fam, c) == 3 * (3 - c) / (3 - c * c));
        if (c < 1) CHECK(slope_mu_c(fam, c) < 3);
    }
    CHECK(slope_mu_c(fam, Rational(1, 2)) == Rational(30, 11));
    CHECK(slope_mu_c(fam, 1) == 3);
    CHECK_THROWS_AS(slope_mu_c(fam, 0), Error);
    CHECK_THROWS_AS(slope_mu_c(fam, Rational(3, 2)), Error);
}

TEST_CASE("slope of the square and tent families") {
    // Square: A0 = (1−t)², A1 = 2(1−t); μ_c = ∫(1−t) / ∫(1−t)² = 3(2−c)/(2(3−3c+c²)).
    for (Rational c : {Rational(1, 4), Rational(1, 2), Rational(3, 4)})
        CHECK(slope_mu_c(fx::square_cuts(), c) == 3 * (2 - c) / (2 * (3 - 3 * c + c * c)));
    // Tent: A1 + A0'/2 = 1 − 1 = 0.
    CHECK(slope_mu_c(fx::tent(), Rational(1, 4)) == 0);
}

TEST_CASE("slope is continuous in c") {
    const auto fam = fx::cp2_vertex();
    auto h = hilbert_functions(fam);
    const Rational mid(1, 2), eps(1, 1000000);
    const Rational base = slope_mu_c(h, mid);
    CHECK(abs(slope_mu_c(h, mid + eps) - base) < Rational(1, 100000));
    CHECK(abs(slope_mu_c(h, mid - eps) - base) < Rational(1, 100000));

    auto hs = hilbert_functions(fx::square_cuts());
    const Rational m2(1, 2);
    CHECK(abs(slope_mu_c(hs, m2 + eps) - slope_mu_c(hs, m2)) < Rational(1, 100000));
}

TEST_CASE("the metric formula reproduces the slope excess") {
    AsymptoticsOptions opt;
    SymplecticPotential u(fx::simplex());
    const auto fam = fx::cp2_vertex();
    for (Rational c : {Rational(1, 4), Rational(1, 2), Rational(3, 4)}) {
        const double cd = to_double(c);
        auto r = slope_report(fam, u, c, opt);
        const auto& m = r.metric;
        CHECK(m.volume_integral == doctest::Approx(cd * (3 - cd * cd) / 6).epsilon(1e-9));
        CHECK(m.surface_term == doctest::Approx(2 * cd * cd * (1 - cd)).epsilon(1e-9));
        CHECK(std::abs(m.excess + 3 * cd * (1 - cd) / (3 - cd * cd)) < 1e-4);
        CHECK(r.verdict == "stable");
        CHECK(r.excess == -3 * c * (1 - c) / (3 - c * c));
        CHECK(std::abs(to_double(r.excess) - r.metric.excess) < 1e-4);
    }
    CHECK_THROWS_AS(slope_excess_metric(fx::square_cuts(), SymplecticPotential(fx::square()), Rational(1, 2), opt), Error);
    CHECK_THROWS_AS(slope_excess_metric(fam, u, 1, opt), Error);
}

TEST_CASE("the metric excess tends to zero as c tends to zero") {
    AsymptoticsOptions opt;
    SymplecticPotential u(fx::simplex());
    auto small = slope_excess_metric(fx::cp2_vertex(), u, Rational(1, 1000), opt);
    CHECK(std::abs(small.excess) < 2e-3);
}

TEST_CASE("Futaki invariant of the tent, combinatorially") {
    auto cfg = build_test_config(fx::tent());
    auto f = futaki_combinatorial(cfg);
    CHECK(f.F0 == Rational(1, 4));
    CHECK(f.F1 == Rational(-1, 4));
    for (std::int64_t k : {2, 4, 10}) {
        CHECK(evaluate(f.w, Rational(k)) == Rational(k * k, 4));
        CHECK(evaluate(f.d, Rational(k)) == Rational(k + 1));
        CHECK(count_lattice_points(cfg.gamma, k) - count_lattice_points(fx::interval(), k) == k * k / 4);
    }
}

TEST_CASE("product configurations have vanishing Futaki invariant") {
    CHECK(futaki_combinatorial(build_test_config(fx::prism())).F1 == 0);
    auto prod = futaki_combinatorial(build_test_config(fx::cp2_product()));
    CHECK(prod.F0 == Rational(1, 3));
    CHECK(prod.F1 == 0);
    // CP² product: w_k/(k d_k) = 1/3 exactly.
    for (std::int64_t k : {1, 2, 5, 9}) {
        const auto d = count_lattice_points(fx::simplex(), k);
        const auto g = count_lattice_points(build_test_config(fx::cp2_product()).gamma, k);
        CHECK(Rational(g - d, k * d) == Rational(1, 3));
    }
}

TEST_CASE("Delta of the tent and the square") {
    AsymptoticsOptions opt;
    SymplecticPotential cp1(fx::interval());
    auto d = delta_gamma(build_test_config(fx::tent()), cp1, opt);
    CHECK(d.volume_gamma == Rational(1, 4));
    CHECK(d.dp_tilde == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(d.delta == doctest::Approx(2.0).epsilon(1e-10));

    SymplecticPotential sq(fx::square());
    auto ds = delta_gamma(build_test_config(fx::square_cuts()), sq, opt);
    CHECK(ds.dp_tilde == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
    CHECK(ds.dp_tilde_sliced == doctest::Approx(ds.dp_tilde).epsilon(1e-6));
    CHECK(ds.delta == doctest::Approx(1.0).epsilon(1e-8));

    AsymptoticsOptions printed;
    printed.convention = DpConvention::Printed;
    CHECK(delta_gamma(build_test_config(fx::tent()), cp1, printed).delta == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("Delta is nonnegative and vanishes exactly for products") {
    AsymptoticsOptions opt;
    Polynomial w(1, {{{3}, 0.05}});
    SymplecticPotential pert(fx::interval(), w);
    SymplecticPotential cp1(fx::interval());
    SymplecticPotential cp2(fx::simplex());
    struct Case {
        MovingFamily fam;
        const SymplecticPotential* u;
    };
    for (const auto& c : {Case{fx::tent(), &cp1}, Case{fx::tent(), &pert}, Case{fx::prism(), &cp1},
                          Case{fx::prism(), &pert}, Case{fx::cp2_product(), &cp2}, Case{fx::cp2_vertex(), &cp2}}) {
        auto cfg = build_test_config(c.fam);
        auto d = delta_gamma(cfg, *c.u, opt);
        CHECK(d.delta >= 0);
        CHECK((d.delta == 0.0) == cfg.is_product());
    }
}

TEST_CASE("metric Futaki invariant matches the combinatorial one") {
    AsymptoticsOptions opt;
    SymplecticPotential cp1(fx::interval());
    SymplecticPotential cp2(fx::simplex());
    SymplecticPotential sq(fx::square());
    SymplecticPotential pert(fx::interval(), Polynomial(1, {{{3}, 0.05}}));
    struct Case {
        MovingFamily fam;
        const SymplecticPotential* u;
        double f1;
    };
    for (const auto& c : {Case{fx::tent(), &cp1, -0.25}, Case{fx::prism(), &cp1, 0.0}, Case{fx::cp2_product(), &cp2, 0.0},
                          Case{fx::square_cuts(), &sq, -1.0 / 6.0}, Case{fx::tent(), &pert, -0.25}}) {
        auto cfg = build_test_config(c.fam);
        CHECK(to_double(futaki_combinatorial(cfg).F1) == doctest::Approx(c.f1).epsilon(1e-15));
        CHECK(std::abs(futaki_metric(cfg, *c.u, opt) - c.f1) <= 1e-4);
    }
    CHECK(std::abs(futaki_metric(build_test_config(fx::prism()), cp1, opt)) <= 1e-6);
    CHECK(std::abs(futaki_metric(build_test_config(fx::cp2_product()), cp2, opt)) <= 1e-6);

    AsymptoticsOptions printed;
    printed.convention = DpConvention::Printed;
    CHECK(futaki_metric(build_test_config(fx::tent()), cp1, printed) == doctest::Approx(-0.5).epsilon(1e-8));
}

TEST_CASE("scalar curvature over Gamma") {
    QuadratureOptions q;
    SymplecticPotential cp1(fx::interval());
    // ∫_Γ 2 = 2 Vol Γ = ½.
    CHECK(gamma_scalar_integral(build_test_config(fx::tent()), cp1, q) == doctest::Approx(0.5).epsilon(1e-10));
    SymplecticPotential cp2(fx::simplex());
    CHECK(gamma_scalar_integral(build_test_config(fx::cp2_product()), cp2, q) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("polystability report and the roof identity") {
    AsymptoticsOptions opt;
    SymplecticPotential cp1(fx::interval());
    auto reps = polystability_report(cp1, {{"tent", fx::tent()}, {"prism", fx::prism()}, {"cut", fx::cp1_cut()}}, opt);
    REQUIRE(reps.size() == 3);
    CHECK(reps[0].verdict == "negative");
    CHECK(reps[0].side_volume == 0);
    CHECK(std::abs(reps[0].roof_residual) <= 1e-6);
    CHECK(reps[1].verdict == "zero-product");
    CHECK(std::abs(reps[1].roof_residual) <= 1e-6);
    // A single-cut roof is a product configuration.
    CHECK(reps[2].error.empty());
    CHECK(reps[2].verdict == "zero-product");

    SymplecticPotential cp2(fx::simplex());
    auto prod = futaki_report(build_test_config(fx::cp2_product()), cp2, opt, "product");
    CHECK(prod.is_product);
    CHECK(prod.side_volume == 1);
    CHECK(prod.gamma_scalar == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(prod.roof_residual) <= 1e-6);

    SymplecticPotential sq(fx::square());
    auto two = futaki_report(build_test_config(fx::square_cuts()), sq, opt, "square");
    CHECK(two.side_volume == 1);
    CHECK(two.gamma_scalar == doctest::Approx(4.0 / 3.0).epsilon(1e-9));
    CHECK(std::abs(two.roof_residual) <= 1e-6);
}

TEST_CASE("the perturbed potential runs through the report") {
    AsymptoticsOptions opt;
    SymplecticPotential pert(fx::interval(), Polynomial(1, {{{3}, 0.05}}));
    auto reps = polystability_report(pert, {{"tent", fx::tent()}, {"prism", fx::prism()}}, opt);
    REQUIRE(reps.size() == 2);
    for (const auto& r : reps) {
        CHECK(r.error.empty());
        CHECK(std::isfinite(r.F1_metric));
    }
}

}
