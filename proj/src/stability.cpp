#include "toric/stability.hpp"

#include "toric/error.hpp"

#include <algorithm>
#include <sstream>

namespace toric {

namespace {

constexpr const char* kModule = "stability";

Vec covector(const AffineFunctional& f) {
    auto g = f.gradient();
    return Eigen::Map<const Vec>(g.data(), static_cast<Eigen::Index>(g.size()));
}

// ∫ g over [a, b] split at the critical values, so every Gauss node sits at a regular t.
double integrate_over_regular(const std::vector<Rational>& crit, const Rational& a, const Rational& b,
                              const std::function<double(const Rational&)>& g) {
    std::vector<Rational> cuts{a};
    for (const auto& c : crit)
        if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        total += integrate_1d([&](double t) { return g(from_double(t)); }, to_double(cuts[i]), to_double(cuts[i + 1]),
                              1e-10, 10, 12);
    return total;
}

}  // namespace

HilbertCoefficients hilbert_coeffs_combinatorial(const MovingFamily& family, const Rational& t, int extra) {
    HilbertCoefficients h;
    h.t = t;
    auto s = slice(family, t);
    if (s.empty()) return h;
    const int n = family.dim();
    h.counts = count_polynomial(*s.polytope, extra);
    h.A0 = coefficient(h.counts.coeffs, n);
    h.A1 = coefficient(h.counts.coeffs, n - 1);
    if (h.A0 != s.polytope->volume())
        fail(ErrorKind::Geometry, kModule, "leading lattice-count coefficient differs from Vol(P(t))");
    return h;
}

GeometricHilbert hilbert_coeffs_geometric(const MovingFamily& family, const SymplecticPotential& u, const Rational& t,
                                          const AsymptoticsOptions& opt) {
    GeometricHilbert g;
    auto s = slice(family, t);
    if (s.empty()) return g;
    g.A0 = to_double(s.polytope->volume());
    const double int_s = slice_integral(
        family, t, [&](std::span<const double> x) { return u.scalar_curvature(x); }, opt.quadrature, opt.threads);
    const double a_hat = a_hat_pair(family, u, t, [](std::span<const double>) { return 1.0; }, opt).value();
    g.A1 = 0.5 * (int_s + a_hat);
    return g;
}

Rational slope_mu(const Polytope& p) {
    auto c = count_polynomial(p);
    return coefficient(c.coeffs, p.dim() - 1) / coefficient(c.coeffs, p.dim());
}

double average_scalar_curvature(const SymplecticPotential& u, const QuadratureOptions& quad, int threads) {
    const auto& p = u.polytope();
    auto scheme = QuadratureScheme::for_polytope(p, quad);
    return integrate(scheme, [&](std::span<const double> x) { return u.scalar_curvature(x); }, threads).value /
           to_double(p.volume());
}

HilbertFunctions hilbert_functions(const MovingFamily& family) {
    HilbertFunctions h;
    h.breaks = critical_values(family);
    const int n = family.dim();
    const int samples = n + 3;
    for (std::size_t i = 0; i + 1 < h.breaks.size(); ++i) {
        const Rational a = h.breaks[i], b = h.breaks[i + 1];
        std::vector<Rational> ts, a0, a1;
        for (int j = 1; j <= samples; ++j) {
            const Rational t = a + (b - a) * j / (samples + 1);
            auto hc = hilbert_coeffs_combinatorial(family, t);
            ts.push_back(t);
            a0.push_back(hc.A0);
            a1.push_back(hc.A1);
        }
        auto p0 = interpolate(ts, a0, n);
        auto p1 = interpolate(ts, a1, n);
        if (!p0 || !p1) {
            std::ostringstream os;
            os << "Hilbert coefficients are not polynomial in t on [" << to_string(a) << ", " << to_string(b) << "]";
            fail(ErrorKind::Geometry, kModule, os.str());
        }
        h.A0.push_back(*p0);
        h.A1.push_back(*p1);
    }
    return h;
}

Rational slope_mu_c(const HilbertFunctions& h, const Rational& c) {
    if (!(c > 0) || h.breaks.empty() || c > h.breaks.back())
        fail(ErrorKind::Precondition, kModule, "slope_mu_c needs 0 < c <= top critical value, got " + to_string(c));
    Rational num = 0, den = 0;
    for (std::size_t i = 0; i + 1 < h.breaks.size(); ++i) {
        const Rational a = h.breaks[i];
        const Rational b = std::min(h.breaks[i + 1], c);
        if (b <= a) break;
        RPoly integrand = h.A1[i];
        auto d0 = derivative(h.A0[i]);
        if (integrand.size() < d0.size()) integrand.resize(d0.size(), Rational(0));
        for (std::size_t j = 0; j < d0.size(); ++j) integrand[j] += d0[j] / 2;
        num += integrate(integrand, a, b);
        den += integrate(h.A0[i], a, b);
    }
    if (den == 0) fail(ErrorKind::Precondition, kModule, "slope_mu_c: zero denominator");
    return num / den;
}

Rational slope_mu_c(const MovingFamily& family, const Rational& c) { return slope_mu_c(hilbert_functions(family), c); }

MetricSlopeExcess slope_excess_metric(const MovingFamily& family, const SymplecticPotential& u, const Rational& c,
                                      const AsymptoticsOptions& opt) {
    if (family.cuts().size() != 1)
        fail(ErrorKind::Precondition, kModule, "the metric slope formula needs a single-cut family");
    require_regular(family, c, Rational(0), kModule);
    const auto crit = critical_values(family);
    const double avg = average_scalar_curvature(u, opt.quadrature, opt.threads);

    MetricSlopeExcess m;
    m.volume_integral = integrate_over_regular(crit, Rational(0), c, [&](const Rational& t) {
        auto s = slice(family, t);
        return s.empty() ? 0.0 : to_double(s.polytope->volume());
    });
    // ∫_{P(t)} s − Av(s)·Vol(P(t)): integrating s itself avoids a cancelling integrand for cscK metrics.
    m.curvature_integral = integrate_over_regular(crit, Rational(0), c, [&](const Rational& t) {
        auto s = slice(family, t);
        if (s.empty()) return 0.0;
        return slice_integral(
                   family, t, [&](std::span<const double> x) { return u.scalar_curvature(x); }, opt.quadrature,
                   opt.threads) -
               avg * to_double(s.polytope->volume());
    });
    m.surface_term = facet_integral(family, u, c, [](std::span<const double>) { return 1.0; }, FacetWeight::ConormSq, opt);
    m.excess = (m.curvature_integral - 0.5 * m.surface_term) / (2.0 * m.volume_integral);
    return m;
}

SlopeReport slope_report(const MovingFamily& family, const SymplecticPotential& u, const Rational& c,
                         const AsymptoticsOptions& opt) {
    SlopeReport r;
    r.c = c;
    r.mu_c = slope_mu_c(family, c);
    r.mu_X = slope_mu(family.base());
    r.excess = r.mu_c - r.mu_X;
    r.metric = slope_excess_metric(family, u, c, opt);
    r.verdict = r.excess < 0 ? "stable" : (r.excess == 0 ? "semistable" : "violated");
    return r;
}

// ---------------------------------------------------------------------------------------------

FutakiCombinatorial futaki_combinatorial(const TestConfigPolytope& config, int extra) {
    const auto& p = config.family.base();
    const int n = p.dim();
    const Integer N = lcm(config.gamma.vertex_denominator(), p.vertex_denominator());
    std::vector<Rational> ks, ws, ds;
    FutakiCombinatorial f;
    for (int j = 1; j <= n + 2 + extra; ++j) {
        const std::int64_t k = (N * j).convert_to<std::int64_t>();
        const std::int64_t dk = count_lattice_points(p, k);
        const std::int64_t gk = count_lattice_points(config.gamma, k);
        f.ks.push_back(k);
        ks.emplace_back(k);
        ws.emplace_back(gk - dk);
        ds.emplace_back(dk);
    }
    auto w = interpolate(ks, ws, n + 1);
    auto d = interpolate(ks, ds, n);
    if (!w || !d) fail(ErrorKind::Geometry, kModule, "w_k or d_k is not polynomial on the sampled progression");
    f.w = *w;
    f.d = *d;
    const Rational dn = coefficient(f.d, n);
    f.F0 = coefficient(f.w, n + 1) / dn;
    f.F1 = coefficient(f.w, n) / dn - coefficient(f.w, n + 1) * coefficient(f.d, n - 1) / (dn * dn);
    return f;
}

DeltaGamma delta_gamma(const TestConfigPolytope& config, const SymplecticPotential& u, const AsymptoticsOptions& opt) {
    const auto& family = config.family;
    const int n = family.dim();
    DeltaGamma d;
    d.volume_gamma = config.gamma.volume();

    double horizontal = 0.0;
    for (const auto& ridge : config.ridges) {
        const auto& face = config.gamma.faces(2)[ridge.face_index];
        const Vec diff = covector(family.cuts()[ridge.cut_a]) - covector(family.cuts()[ridge.cut_b]);
        const double value =
            leray_codim2_density(config.roof_functional(ridge.cut_a), config.roof_functional(ridge.cut_b)) *
            face_integral(
                config.gamma, face,
                [&](std::span<const double> xt) { return u.conorm_sq(diff, xt.first(static_cast<std::size_t>(n))); },
                opt.quadrature, opt.threads);
        d.dp_tilde += value;
        if (ridge.horizontal) horizontal += value;
    }

    const auto crit = critical_values(config);
    d.dp_tilde_sliced = horizontal;
    if (n >= 2 && !config.is_product()) {
        d.dp_tilde_sliced += integrate_over_regular(crit, crit.front(), crit.back(), [&](const Rational& t) {
            return dp_integral(family, u, t, [](std::span<const double>) { return 1.0; }, opt);
        });
    }
    d.delta = dp_coefficient(opt.convention) * d.dp_tilde / to_double(d.volume_gamma);
    return d;
}

double gamma_scalar_integral(const TestConfigPolytope& config, const SymplecticPotential& u,
                             const QuadratureOptions& quad, int threads) {
    const auto& family = config.family;
    const auto& cuts = family.cuts();
    double total = 0.0;
    for (std::size_t a = 0; a < cuts.size(); ++a) {
        bool duplicate = false;
        std::vector<AffineFunctional> ineqs = family.base().inequalities();
        for (std::size_t b = 0; b < cuts.size(); ++b) {
            if (b == a) continue;
            RVec nu(cuts[b].normal.size());
            for (std::size_t j = 0; j < nu.size(); ++j) nu[j] = cuts[b].normal[j] - cuts[a].normal[j];
            AffineFunctional diff(std::move(nu), cuts[b].offset - cuts[a].offset);
            if (diff.is_constant() && diff.offset == 0 && b < a) duplicate = true;
            ineqs.push_back(std::move(diff));
        }
        if (duplicate) continue;
        auto cell = Polytope::make_if_full(family.dim(), std::move(ineqs));
        if (!cell) continue;
        const auto& phi = cuts[a];
        total += integrate(
                     QuadratureScheme::for_polytope(*cell, quad),
                     [&](std::span<const double> x) { return u.scalar_curvature(x) * phi(x); }, threads)
                     .value;
    }
    return total;
}

namespace {

struct MetricParts {
    double F1 = 0.0;
    double gamma_scalar = 0.0;
    double average_gamma = 0.0;
    double average_p = 0.0;
    DeltaGamma delta;
};

MetricParts futaki_metric_parts(const TestConfigPolytope& config, const SymplecticPotential& u,
                                const AsymptoticsOptions& opt) {
    MetricParts m;
    const double vol_gamma = to_double(config.gamma.volume());
    const double vol_p = to_double(config.family.base().volume());
    m.gamma_scalar = gamma_scalar_integral(config, u, opt.quadrature, opt.threads);
    m.average_gamma = m.gamma_scalar / vol_gamma;
    m.average_p = average_scalar_curvature(u, opt.quadrature, opt.threads);
    m.delta = delta_gamma(config, u, opt);
    m.F1 = vol_gamma / (2.0 * vol_p) * (m.average_gamma - m.average_p - m.delta.delta);
    return m;
}

}  // namespace

double futaki_metric(const TestConfigPolytope& config, const SymplecticPotential& u, const AsymptoticsOptions& opt) {
    return futaki_metric_parts(config, u, opt).F1;
}

FutakiReport futaki_report(const TestConfigPolytope& config, const SymplecticPotential& u,
                           const AsymptoticsOptions& opt, std::string name) {
    FutakiReport r;
    r.name = std::move(name);
    r.is_product = config.is_product();
    r.F1_combinatorial = futaki_combinatorial(config).F1;
    auto m = futaki_metric_parts(config, u, opt);
    r.F1_metric = m.F1;
    r.delta = m.delta;
    r.volume_p = config.family.base().volume();
    r.average_gamma = m.average_gamma;
    r.average_p = m.average_p;
    r.gamma_scalar = m.gamma_scalar;
    for (int f : config.side_facets) r.side_volume += config.gamma.lattice_facet_volume(config.gamma.facets()[f]);
    r.roof_residual =
        to_double(r.side_volume) - (r.gamma_scalar - dp_coefficient(opt.convention) * r.delta.dp_tilde);
    if (r.F1_combinatorial < 0) r.verdict = "negative";
    else if (r.F1_combinatorial == 0 && r.is_product) r.verdict = "zero-product";
    else r.verdict = "violation";
    return r;
}

std::vector<FutakiReport> polystability_report(const SymplecticPotential& u,
                                               const std::vector<std::pair<std::string, MovingFamily>>& configs,
                                               const AsymptoticsOptions& opt) {
    std::vector<FutakiReport> out;
    for (const auto& [name, family] : configs) {
        try {
            out.push_back(futaki_report(build_test_config(family), u, opt, name));
        } catch (const Error& e) {
            FutakiReport r;
            r.name = name;
            r.error = e.what();
            out.push_back(std::move(r));
        }
    }
    return out;
}

}  // namespace toric
