#include "toric/lattice_poly.hpp"

#include "toric/error.hpp"
#include "toric/exact_linalg.hpp"

namespace toric {

std::optional<RPoly> interpolate(const std::vector<Rational>& x, const std::vector<Rational>& y, int degree) {
    const int m = degree + 1;
    if (static_cast<int>(x.size()) < m || x.size() != y.size())
        fail(ErrorKind::Precondition, "polytope_core", "interpolation needs at least degree+1 samples");
    exact::Matrix v(m, RVec(m));
    RVec rhs(m);
    for (int i = 0; i < m; ++i) {
        Rational p = 1;
        for (int j = 0; j < m; ++j) {
            v[i][j] = p;
            p *= x[i];
        }
        rhs[i] = y[i];
    }
    auto c = exact::solve(std::move(v), std::move(rhs));
    if (!c) return std::nullopt;
    for (std::size_t i = m; i < x.size(); ++i)
        if (evaluate(*c, x[i]) != y[i]) return std::nullopt;
    return c;
}

Rational evaluate(const RPoly& p, const Rational& x) {
    Rational v = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * x + *it;
    return v;
}

RPoly derivative(const RPoly& p) {
    RPoly d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long>(i));
    return d;
}

Rational integrate(const RPoly& p, const Rational& a, const Rational& b) {
    RPoly q{Rational(0)};
    for (std::size_t i = 0; i < p.size(); ++i) q.push_back(p[i] / static_cast<long>(i + 1));
    return evaluate(q, b) - evaluate(q, a);
}

Rational coefficient(const RPoly& p, int degree) {
    return degree >= 0 && degree < static_cast<int>(p.size()) ? p[degree] : Rational(0);
}

CountPolynomial count_polynomial(const Polytope& p, int extra) {
    CountPolynomial out;
    out.divisor = p.vertex_denominator();
    const std::int64_t N = out.divisor.convert_to<std::int64_t>();
    std::vector<Rational> xs, ys;
    for (int j = 1; j <= p.dim() + 1 + extra; ++j) {
        const std::int64_t k = N * j;
        const std::int64_t c = count_lattice_points(p, k);
        out.ks.push_back(k);
        out.counts.push_back(c);
        xs.emplace_back(k);
        ys.emplace_back(c);
    }
    auto c = interpolate(xs, ys, p.dim());
    if (!c) fail(ErrorKind::Geometry, "polytope_core", "lattice counts are not polynomial on the sampled progression");
    out.coeffs = *c;
    return out;
}

}  // namespace toric
