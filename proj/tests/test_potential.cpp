#include "fixtures.hpp"

#include "toric/error.hpp"
#include "toric/potential.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace toric;

namespace {

std::vector<std::vector<double>> interior_grid(const Polytope& p, int m) {
    std::vector<std::vector<double>> pts;
    if (p.dim() == 1) {
        for (int i = 1; i <= m; ++i) pts.push_back({double(i) / (m + 1)});
        return pts;
    }
    for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= m; ++j) {
            std::vector<double> x{double(i) / (m + 1), double(j) / (m + 1)};
            bool inside = true;
            for (const auto& f : p.inequalities()) inside = inside && f(std::span<const double>(x)) > 1e-12;
            if (inside) pts.push_back(x);
        }
    return pts;
}

}  // namespace

TEST_SUITE("potential") {

TEST_CASE("Guillemin Hessian and inverse on the simplex") {
    SymplecticPotential u(fx::simplex());
    const std::vector<double> x{0.25, 0.25};
    Mat H = u.hessian(x);
    CHECK(H(0, 0) == doctest::Approx(3.0));
    CHECK(H(0, 1) == doctest::Approx(1.0));
    CHECK(H(1, 1) == doctest::Approx(3.0));
    Mat G = u.inverse_metric(x);
    CHECK(G(0, 0) == doctest::Approx(0.375));
    CHECK(G(0, 1) == doctest::Approx(-0.125));
    CHECK(G(1, 1) == doctest::Approx(0.375));
}

TEST_CASE("Guillemin value and gradient on the interval") {
    SymplecticPotential u(fx::interval());
    const std::vector<double> x{0.25};
    const double expect = 0.5 * (0.25 * std::log(0.25) + 0.75 * std::log(0.75));
    CHECK(u.value(x) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(u.gradient(x)(0) == doctest::Approx(0.5 * std::log(0.25 / 0.75)).epsilon(1e-14));
    CHECK(u.value(std::vector<double>{0.0}) == doctest::Approx(0.0));
    CHECK(u.inverse_metric(x)(0, 0) == doctest::Approx(2 * 0.25 * 0.75));
}

TEST_CASE("scalar curvature is constant for the Guillemin potential") {
    struct Case {
        Polytope p;
        double s;
    };
    for (const auto& c : {Case{fx::interval(), 2.0}, Case{fx::simplex(), 6.0}, Case{fx::square(), 4.0}}) {
        SymplecticPotential u(c.p);
        for (const auto& x : interior_grid(c.p, 10)) CHECK(std::abs(u.scalar_curvature(x) - c.s) < 1e-9);
    }
}

TEST_CASE("scalar curvature stays accurate next to a facet") {
    SymplecticPotential u(fx::simplex());
    for (double eps : {1e-3, 1e-6, 1e-9}) {
        const std::vector<double> x{0.5 - eps, 0.5 - eps};
        CHECK(std::abs(u.scalar_curvature(x) - 6.0) < 1e-7);
        const std::vector<double> y{eps, 0.3};
        CHECK(std::abs(u.scalar_curvature(y) - 6.0) < 1e-7);
    }
}

TEST_CASE("analytic scalar curvature agrees with finite differences") {
    Polynomial w(2, {{{3, 0}, 0.05}, {{1, 2}, -0.04}, {{2, 2}, 0.03}});
    SymplecticPotential u(fx::square(), w);
    for (const auto& x : interior_grid(fx::square(), 5)) {
        CHECK(std::abs(u.scalar_curvature(x) - u.scalar_curvature_fd(x)) < 1e-6);
    }
    Polynomial w1(1, {{{3}, 0.05}});
    SymplecticPotential u1(fx::interval(), w1);
    for (const auto& x : interior_grid(fx::interval(), 9)) {
        CHECK(std::abs(u1.scalar_curvature(x) - u1.scalar_curvature_fd(x)) < 1e-6);
    }
}

TEST_CASE("phi on the interval") {
    SymplecticPotential u(fx::interval());
    const std::vector<double> x{0.5}, y{0.25};
    CHECK(u.phi(x, y) == doctest::Approx(0.143841036225890).epsilon(1e-12));
    // Kullback-Leibler form: φ(x,y) = x log(x/y) + (1−x) log((1−x)/(1−y)).
    for (double a : {0.0, 0.1, 0.7, 1.0})
        for (double b : {0.2, 0.5, 0.9}) {
            const double kl = (a > 0 ? a * std::log(a / b) : 0.0) + (a < 1 ? (1 - a) * std::log((1 - a) / (1 - b)) : 0.0);
            CHECK(u.phi(std::vector<double>{a}, std::vector<double>{b}) == doctest::Approx(kl).epsilon(1e-12));
        }
}

TEST_CASE("phi vanishes to second order on the diagonal and is bounded below") {
    Polynomial w(2, {{{2, 1}, 0.05}});
    for (const auto& p : {fx::simplex(), fx::square()}) {
        SymplecticPotential u(p, w);
        const auto pts = interior_grid(p, 6);
        for (const auto& y : pts) {
            CHECK(std::abs(u.phi(y, y)) < 1e-14);
            const double h = 1e-5;
            for (int i = 0; i < 2; ++i) {
                auto xp = y, xm = y;
                xp[i] += h;
                xm[i] -= h;
                CHECK(std::abs((u.phi(xp, y) - u.phi(xm, y)) / (2 * h)) < 1e-8);
            }
            for (const auto& x : pts) {
                const double d2 = (x[0] - y[0]) * (x[0] - y[0]) + (x[1] - y[1]) * (x[1] - y[1]);
                CHECK(u.phi(x, y) >= 0.4 * d2);
            }
        }
    }
    SymplecticPotential u1(fx::interval());
    for (double a = 0.0; a <= 1.0; a += 0.05)
        for (double b = 0.05; b < 1.0; b += 0.1)
            CHECK(u1.phi(std::vector<double>{a}, std::vector<double>{b}) >= 2 * (a - b) * (a - b) - 1e-15);
}

TEST_CASE("G applied to a facet normal vanishes linearly at that facet") {
    SymplecticPotential u(fx::simplex());
    const Mat& nu = u.facet_normals();
    const Vec& lam = u.facet_offsets();
    for (const auto& x : interior_grid(fx::simplex(), 12)) {
        Mat G = u.inverse_metric(x);
        for (int a = 0; a < nu.rows(); ++a) {
            const double l = nu.row(a).dot(Eigen::Map<const Vec>(x.data(), 2)) - lam(a);
            CHECK((G * nu.row(a).transpose()).norm() <= 3.0 * l);
        }
    }
}

TEST_CASE("conormal norms") {
    SymplecticPotential u(fx::interval());
    CHECK(u.conorm_sq(fx::F({1}, 0), std::vector<double>{0.25}) == doctest::Approx(0.375));
    SymplecticPotential v(fx::simplex());
    const std::vector<double> x{0.25, 0.25};
    // |d(x1 + x2)|² = 1ᵀ G 1.
    CHECK(v.conorm_sq(fx::F({1, 1}, 0), x) == doctest::Approx(0.5));
}

TEST_CASE("preconditions") {
    SymplecticPotential u(fx::simplex());
    CHECK_THROWS_AS(u.require_interior(std::vector<double>{0.0, 0.5}), Error);
    CHECK_THROWS_AS(u.hessian(std::vector<double>{0.6, 0.6}), Error);
    try {
        u.scalar_curvature(std::vector<double>{0.5, 0.5});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Precondition);
        CHECK(e.module() == "potential");
    }
    CHECK_THROWS_AS(SymplecticPotential(fx::interval(), Polynomial(1, {{{2}, -10.0}})), Error);
    CHECK_THROWS_AS(SymplecticPotential(fx::interval(), Polynomial(2, {{{2, 0}, 1.0}})), Error);
}

}
