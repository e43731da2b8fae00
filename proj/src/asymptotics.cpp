#include "toric/asymptotics.hpp"

#include "toric/error.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace toric {

namespace {

constexpr const char* kModule = "asymptotics";

Rational power(std::int64_t k, int e) {
    Rational r = 1;
    for (int i = 0; i < e; ++i) r *= k;
    return r;
}

// Inequality index → cut index in a slice (base inequalities come first), or −1.
int cut_of(const MovingFamily& family, int rep) {
    const int d = static_cast<int>(family.base().inequalities().size());
    return rep >= d ? rep - d : -1;
}

Vec covector(const AffineFunctional& f) {
    auto g = f.gradient();
    return Eigen::Map<const Vec>(g.data(), static_cast<Eigen::Index>(g.size()));
}

// d/dt of g at t: five-point stencil (O(h⁴)); the stencil is validated by the caller.
template <class G>
double derivative_in_t(G&& g, const Rational& t, const Rational& h) {
    const double hd = to_double(h);
    return (-g(t + 2 * h) + 8.0 * g(t + h) - 8.0 * g(t - h) + g(t - 2 * h)) / (12.0 * hd);
}

}  // namespace

const char* to_string(DpConvention c) { return c == DpConvention::Corrected ? "corrected" : "printed"; }

DpConvention parse_dp_convention(const std::string& s) {
    if (s == "corrected") return DpConvention::Corrected;
    if (s == "printed") return DpConvention::Printed;
    fail(ErrorKind::Parse, "cli", "dp convention must be 'corrected' or 'printed', got '" + s + "'");
}

double dp_coefficient(DpConvention c) { return c == DpConvention::Corrected ? 0.5 : 1.0; }

void require_regular(const MovingFamily& family, const Rational& t, const Rational& h, const char* module) {
    for (const auto& c : critical_values(family)) {
        if (c >= t - h && c <= t + h) {
            std::ostringstream os;
            os << "t = " << to_string(t) << " is not regular: critical value " << to_string(c);
            if (h != 0) os << " lies within the difference stencil of half-width " << to_string(h);
            fail(ErrorKind::Precondition, module, os.str());
        }
    }
}

// ---------------------------------------------------------------------------------------------

EulerMaclaurinExact euler_maclaurin(const Polytope& p, std::int64_t k) {
    if (Integer(k) % p.vertex_denominator() != 0)
        fail(ErrorKind::Precondition, kModule, "kP is not integral for k = " + std::to_string(k));
    EulerMaclaurinExact r;
    r.k = k;
    r.lattice_sum = count_lattice_points(p, k);
    r.approx = power(k, p.dim()) * p.volume() + power(k, p.dim() - 1) * p.lattice_boundary_volume() / 2;
    r.residual = Rational(r.lattice_sum) - r.approx;
    return r;
}

EulerMaclaurinRow euler_maclaurin(const Polytope& p, const TestFunction::Value& f, std::int64_t k,
                                  const QuadratureOptions& quad) {
    if (Integer(k) % p.vertex_denominator() != 0)
        fail(ErrorKind::Precondition, kModule, "kP is not integral for k = " + std::to_string(k));
    const int n = p.dim();
    std::vector<double> terms;
    for (const auto& beta : p.lattice_points(k)) {
        std::vector<double> x(n);
        for (int j = 0; j < n; ++j) x[j] = static_cast<double>(beta[j]) / static_cast<double>(k);
        terms.push_back(f(x));
    }
    double boundary = 0.0;
    for (const auto& facet : p.facets()) {
        const auto& l = p.inequalities()[facet.active_facets[0]];
        boundary += leray_facet_density(l.primitive()) * face_integral(p, facet, f, quad);
    }
    const double kn = std::pow(static_cast<double>(k), n);
    EulerMaclaurinRow r;
    r.k = k;
    r.lattice_sum = pairwise_sum(terms);
    r.approx = kn * integrate(p, [&](std::span<const double> x) { return f(x); }, quad).value +
               0.5 * kn / static_cast<double>(k) * boundary;
    r.residual = r.lattice_sum - r.approx;
    return r;
}

// ---------------------------------------------------------------------------------------------

double face_integral(const Polytope& p, const Face& face, const TestFunction::Value& f, const QuadratureOptions& quad,
                     int threads) {
    if (face.codim == p.dim()) return f(to_double(p.vertices()[face.vertices.at(0)]));
    return integrate(QuadratureScheme::for_face(p, face, quad), [&](std::span<const double> x) { return f(x); }, threads)
        .value;
}

double slice_integral(const MovingFamily& family, const Rational& t, const TestFunction::Value& f,
                      const QuadratureOptions& quad, int threads) {
    auto s = slice(family, t);
    if (s.empty()) return 0.0;
    return integrate(QuadratureScheme::for_polytope(*s.polytope, quad), [&](std::span<const double> x) { return f(x); },
                     threads)
        .value;
}

double facet_integral(const MovingFamily& family, const SymplecticPotential& u, const Rational& t,
                      const TestFunction::Value& f, FacetWeight weight, const AsymptoticsOptions& opt,
                      LerayChoice leray) {
    require_regular(family, t, 0, kModule);
    auto s = slice(family, t);
    if (s.empty()) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < s.new_facets.size(); ++i) {
        const auto& phi = family.cuts()[s.new_cuts[i]];
        const double density = leray_facet_density(leray == LerayChoice::Primitive ? phi.primitive() : phi);
        const auto& face = s.polytope->facets()[s.new_facets[i]];
        total += density * face_integral(
                               *s.polytope, face,
                               [&](std::span<const double> x) {
                                   const double w = weight == FacetWeight::One ? 1.0 : u.conorm_sq(phi, x);
                                   return f(x) * w;
                               },
                               opt.quadrature, opt.threads);
    }
    return total;
}

double dp_integral(const MovingFamily& family, const SymplecticPotential& u, const Rational& t,
                   const TestFunction::Value& f, const AsymptoticsOptions& opt) {
    require_regular(family, t, 0, kModule);
    if (family.dim() < 2) return 0.0;
    auto s = slice(family, t);
    if (s.empty()) return 0.0;
    double total = 0.0;
    for (const auto& face : s.polytope->faces(2)) {
        std::vector<int> cuts;
        for (int rep : face.active_facets)
            if (int c = cut_of(family, rep); c >= 0) cuts.push_back(c);
        if (cuts.size() != 2 || face.active_facets.size() != 2) continue;
        const auto& a = family.cuts()[cuts[0]];
        const auto& b = family.cuts()[cuts[1]];
        const Vec diff = covector(a) - covector(b);
        total += leray_codim2_density(a, b) *
                 face_integral(
                     *s.polytope, face, [&](std::span<const double> x) { return f(x) * u.conorm_sq(diff, x); },
                     opt.quadrature, opt.threads);
    }
    return total;
}

BoundaryDistribution a_hat_pair(const MovingFamily& family, const SymplecticPotential& u, const Rational& t,
                                const TestFunction::Value& f, const AsymptoticsOptions& opt) {
    require_regular(family, t, 2 * opt.h_t, kModule);
    BoundaryDistribution d;
    d.t = t;
    d.facet_term = facet_integral(family, u, t, f, FacetWeight::One, opt, LerayChoice::Primitive);
    d.derivative_term =
        -0.5 * derivative_in_t(
                   [&](const Rational& s) { return facet_integral(family, u, s, f, FacetWeight::ConormSq, opt); }, t,
                   opt.h_t);
    d.corner_term = -dp_coefficient(opt.convention) * dp_integral(family, u, t, f, opt);
    return d;
}

ExpansionTable expansion_residual(const MovingFamily& family, std::shared_ptr<const SymplecticPotential> u,
                                  const Rational& t, const TestFunction::Value& f, const std::vector<std::int64_t>& ks,
                                  const AsymptoticsOptions& opt) {
    const double a_hat = a_hat_pair(family, *u, t, f, opt).value();
    const double int_f = slice_integral(family, t, f, opt.quadrature, opt.threads);
    const double int_sf = slice_integral(
        family, t, [&](std::span<const double> x) { return u->scalar_curvature(x) * f(x); }, opt.quadrature,
        opt.threads);

    ExpansionTable table;
    std::vector<double> lk, lr;
    const int n = family.dim();
    for (auto k : ks) {
        DensityOptions dopt{opt.quadrature, opt.threads};
        SectionBasis basis(u, k, dopt);
        const auto idx = partial_indices(basis, family, t);
        ExpansionResidual row;
        row.k = k;
        row.direct = pair_partial_density(basis, idx, f);
        const double kd = static_cast<double>(k);
        row.asymptotic = std::pow(kd, n) * (int_f + (int_sf + a_hat) / (2.0 * kd));
        row.residual = row.direct - row.asymptotic;
        if (std::abs(row.residual) > opt.noise_floor * std::max(1.0, std::abs(row.direct))) {
            lk.push_back(std::log(kd));
            lr.push_back(std::log(std::abs(row.residual)));
        }
        table.rows.push_back(row);
    }
    table.at_noise_floor = lk.size() < 2;
    table.slope = table.at_noise_floor ? std::numeric_limits<double>::quiet_NaN() : fit_slope(lk, lr);
    return table;
}

BoundaryVolumeCheck boundary_volume_identity(const MovingFamily& family, const SymplecticPotential& u,
                                             const Rational& t, const AsymptoticsOptions& opt) {
    BoundaryVolumeCheck r;
    r.t = t;
    auto one = [](std::span<const double>) { return 1.0; };
    auto s_of = [&](std::span<const double> x) { return u.scalar_curvature(x); };
    if (t == 0) {
        r.old_boundary_volume = family.base().lattice_boundary_volume();
        r.scalar_integral = integrate(family.base(), s_of, opt.quadrature).value;
    } else {
        require_regular(family, t, 2 * opt.h_t, kModule);
        auto s = slice(family, t);
        if (!s.empty()) {
            for (int f : s.old_facets) r.old_boundary_volume += s.polytope->lattice_facet_volume(s.polytope->facets()[f]);
            r.scalar_integral = slice_integral(family, t, s_of, opt.quadrature, opt.threads);
        }
        r.derivative_term = derivative_in_t(
            [&](const Rational& q) { return facet_integral(family, u, q, one, FacetWeight::ConormSq, opt); }, t, opt.h_t);
        r.dp_term = dp_integral(family, u, t, one, opt);
    }
    const double a = opt.convention == DpConvention::Corrected ? 0.5 : 1.0;
    const double c = dp_coefficient(opt.convention);
    r.residual = to_double(r.old_boundary_volume) - (r.scalar_integral - a * r.derivative_term - c * r.dp_term);
    return r;
}

DivergenceCheck divergence_identity_check(const MovingFamily& family, const Rational& t,
                                          const std::vector<Polynomial>& xi, const AsymptoticsOptions& opt) {
    if (family.cuts().size() != 1) fail(ErrorKind::Precondition, kModule, "divergence check needs a single-cut family");
    const int n = family.dim();
    if (static_cast<int>(xi.size()) != n) fail(ErrorKind::Precondition, kModule, "vector field has the wrong dimension");
    require_regular(family, t, 2 * opt.h_t, kModule);

    const auto& phi = family.cuts()[0];
    const auto grad = phi.gradient();
    std::vector<Polynomial> dxi;
    for (int i = 0; i < n; ++i) dxi.push_back(xi[i].derivative(i));

    auto over_w = [&](const Rational& q, const TestFunction::Value& g) {
        auto s = slice(family, q);
        if (s.empty() || s.new_facets.empty()) fail(ErrorKind::Precondition, kModule, "W(t) is empty");
        return leray_facet_density(phi) * face_integral(*s.polytope, s.polytope->facets()[s.new_facets[0]], g,
                                                        opt.quadrature, opt.threads);
    };

    DivergenceCheck r;
    r.divergence = over_w(t, [&](std::span<const double> x) {
        double d = 0.0;
        for (const auto& p : dxi) d += p(x);
        return d;
    });
    r.derivative = derivative_in_t(
        [&](const Rational& q) {
            return over_w(q, [&](std::span<const double> x) {
                double v = 0.0;
                for (int i = 0; i < n; ++i) v += xi[i](x) * grad[i];
                return v;
            });
        },
        t, opt.h_t);

    if (n >= 2) {
        auto s = slice(family, t);
        for (const auto& face : s.polytope->faces(2)) {
            int cut = -1, old = -1;
            for (int rep : face.active_facets) (cut_of(family, rep) >= 0 ? cut : old) = rep;
            if (cut < 0 || old < 0 || face.active_facets.size() != 2) continue;
            const auto& lb = family.base().inequalities()[old];
            const auto nu = lb.gradient();
            r.flux += leray_codim2_density(phi, lb) * face_integral(
                                                          *s.polytope, face,
                                                          [&](std::span<const double> x) {
                                                              double v = 0.0;
                                                              for (int i = 0; i < n; ++i) v += xi[i](x) * nu[i];
                                                              return v;
                                                          },
                                                          opt.quadrature, opt.threads);
        }
    }
    r.residual = r.divergence - (r.derivative - r.flux);
    return r;
}

}  // namespace toric
