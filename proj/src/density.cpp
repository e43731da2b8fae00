#include "toric/density.hpp"

#include "toric/error.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace toric {

namespace {

constexpr const char* kModule = "density";

// Everything about α that the kernel e^{−kφ(α,z)} needs, so that the per-node cost is one dot product
// against log ℓ(z).
struct AlphaData {
    Vec x;
    Vec l;          // ℓ_a(α) ≥ 0
    double c = 0.0; // Σ_a (ℓ_a log ℓ_a − ℓ_a)(α)
    double w = 0.0; // w(α)
};

struct KernelContext {
    const SymplecticPotential& u;
    std::vector<Polynomial> dw;

    explicit KernelContext(const SymplecticPotential& pot) : u(pot) {
        if (!u.perturbation().is_zero())
            for (int i = 0; i < u.dim(); ++i) dw.push_back(u.perturbation().derivative(i));
    }

    AlphaData prepare(std::span<const double> alpha) const {
        AlphaData a;
        a.x = Eigen::Map<const Vec>(alpha.data(), static_cast<Eigen::Index>(alpha.size()));
        a.l = u.facet_normals() * a.x - u.facet_offsets();
        for (Eigen::Index f = 0; f < a.l.size(); ++f) {
            if (a.l(f) < -1e-12) fail(ErrorKind::Precondition, kModule, "alpha lies outside P");
            a.l(f) = std::max(a.l(f), 0.0);
            a.c += (a.l(f) > 0.0 ? a.l(f) * std::log(a.l(f)) : 0.0) - a.l(f);
        }
        if (!dw.empty()) a.w = u.perturbation()(alpha);
        return a;
    }

    // Node data shared by all α: ℓ(z), log ℓ(z), w(z), ∇w(z).
    struct Node {
        Vec l, logl;
        double sum_l = 0.0;
        double w = 0.0;
        Vec grad_w;
        Vec z;
    };

    void load(std::span<const double> z, Node& node) const {
        node.z = Eigen::Map<const Vec>(z.data(), static_cast<Eigen::Index>(z.size()));
        node.l = u.facet_normals() * node.z - u.facet_offsets();
        node.logl = node.l.array().log();
        node.sum_l = node.l.sum();
        if (!dw.empty()) {
            node.w = u.perturbation()(z);
            node.grad_w.resize(u.dim());
            for (int i = 0; i < u.dim(); ++i) node.grad_w(i) = dw[i](z);
        }
    }

    double phi(const AlphaData& a, const Node& node) const {
        double v = a.c + node.sum_l - a.l.dot(node.logl);
        if (!dw.empty()) v += 2.0 * (a.w - node.w - node.grad_w.dot(a.x - node.z));
        return v;
    }
};

std::vector<std::vector<double>> moments(const KernelContext& ctx, const QuadratureScheme& scheme,
                                         const std::vector<AlphaData>& alphas, double k,
                                         const std::vector<TestFunction::Value>& weights, int threads) {
    const int nw = static_cast<int>(weights.size());
    const int comps = static_cast<int>(alphas.size()) * nw;
    VectorIntegralOptions vopt;
    vopt.threads = threads;
    vopt.group_size = nw;
    vopt.module = kModule;
    auto r = integrate_vector(
        scheme, comps,
        [&](std::span<const double> z, std::vector<double>& out) {
            thread_local KernelContext::Node node;
            ctx.load(z, node);
            std::vector<double> g(nw);
            for (int j = 0; j < nw; ++j) g[j] = weights[j](z);
            for (std::size_t i = 0; i < alphas.size(); ++i) {
                const double e = std::exp(-k * ctx.phi(alphas[i], node));
                for (int j = 0; j < nw; ++j) out[i * nw + j] = e * g[j];
            }
        },
        vopt);
    std::vector<std::vector<double>> m(alphas.size(), std::vector<double>(nw));
    for (std::size_t i = 0; i < alphas.size(); ++i)
        for (int j = 0; j < nw; ++j) m[i][j] = r.values[i * nw + j];
    return m;
}

}  // namespace

// ---------------------------------------------------------------------------------------------
// Test functions

TestFunction::TestFunction(int dim, Value v, Gradient g, Hessian h, std::string name)
    : dim_(dim), value_(std::move(v)), gradient_(std::move(g)), hessian_(std::move(h)), name_(std::move(name)) {}

TestFunction TestFunction::constant(int dim, double c) {
    return TestFunction(
        dim, [c](std::span<const double>) { return c; },
        [dim](std::span<const double>) { return Vec(Vec::Zero(dim)); },
        [dim](std::span<const double>) { return Mat(Mat::Zero(dim, dim)); }, "constant");
}

TestFunction TestFunction::polynomial(const Polynomial& p, std::string name) {
    const int n = p.dim();
    std::vector<Polynomial> d1, d2;
    for (int i = 0; i < n; ++i) d1.push_back(p.derivative(i));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d2.push_back(d1[i].derivative(j));
    return TestFunction(
        n, [p](std::span<const double> x) { return p(x); },
        [d1, n](std::span<const double> x) {
            Vec g(n);
            for (int i = 0; i < n; ++i) g(i) = d1[i](x);
            return g;
        },
        [d2, n](std::span<const double> x) {
            Mat h(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) h(i, j) = d2[i * n + j](x);
            return h;
        },
        std::move(name));
}

TestFunction TestFunction::bump(std::vector<double> center, double radius) {
    const int n = static_cast<int>(center.size());
    if (!(radius > 0.0)) fail(ErrorKind::Precondition, kModule, "bump radius must be positive");
    const double r2 = radius * radius;
    // b = exp(g(q)), g = −1/(1−q), q = |x−c|²/r².
    auto q_of = [center, r2, n](std::span<const double> x) {
        double q = 0.0;
        for (int i = 0; i < n; ++i) q += (x[i] - center[i]) * (x[i] - center[i]);
        return q / r2;
    };
    return TestFunction(
        n,
        [q_of](std::span<const double> x) {
            const double q = q_of(x);
            return q < 1.0 ? std::exp(-1.0 / (1.0 - q)) : 0.0;
        },
        [q_of, center, r2, n](std::span<const double> x) {
            Vec g = Vec::Zero(n);
            const double q = q_of(x);
            if (q >= 1.0) return g;
            const double b = std::exp(-1.0 / (1.0 - q));
            const double db = -b / ((1.0 - q) * (1.0 - q));
            for (int i = 0; i < n; ++i) g(i) = db * 2.0 * (x[i] - center[i]) / r2;
            return g;
        },
        [q_of, center, r2, n](std::span<const double> x) {
            Mat h = Mat::Zero(n, n);
            const double q = q_of(x);
            if (q >= 1.0) return h;
            const double m = 1.0 - q;
            const double b = std::exp(-1.0 / m);
            const double g1 = -1.0 / (m * m), g2 = -2.0 / (m * m * m);
            const double db = b * g1, d2b = b * (g1 * g1 + g2);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const double qi = 2.0 * (x[i] - center[i]) / r2, qj = 2.0 * (x[j] - center[j]) / r2;
                    h(i, j) = d2b * qi * qj + (i == j ? db * 2.0 / r2 : 0.0);
                }
            return h;
        },
        "bump");
}

TestFunction TestFunction::combination(const std::vector<std::pair<double, TestFunction>>& terms) {
    if (terms.empty()) fail(ErrorKind::Precondition, kModule, "empty linear combination");
    const int n = terms.front().second.dim();
    return TestFunction(
        n,
        [terms](std::span<const double> x) {
            double v = 0.0;
            for (const auto& [c, f] : terms) v += c * f(x);
            return v;
        },
        [terms, n](std::span<const double> x) {
            Vec g = Vec::Zero(n);
            for (const auto& [c, f] : terms) g += c * f.gradient(x);
            return g;
        },
        [terms, n](std::span<const double> x) {
            Mat h = Mat::Zero(n, n);
            for (const auto& [c, f] : terms) h += c * f.hessian(x);
            return h;
        },
        "combination");
}

// ---------------------------------------------------------------------------------------------

std::vector<std::vector<double>> kernel_moments(const SymplecticPotential& u, const QuadratureScheme& scheme,
                                                const std::vector<std::vector<double>>& alphas, double k,
                                                const std::vector<TestFunction::Value>& weights, int threads) {
    KernelContext ctx(u);
    std::vector<AlphaData> data;
    for (const auto& a : alphas) data.push_back(ctx.prepare(a));
    return moments(ctx, scheme, data, k, weights, threads);
}

SectionBasis::SectionBasis(std::shared_ptr<const SymplecticPotential> u, std::int64_t k, DensityOptions options)
    : u_(std::move(u)), k_(k), options_(options),
      scheme_(QuadratureScheme::for_polytope(u_->polytope(), options.quadrature)) {
    if (k_ < 1) fail(ErrorKind::Precondition, kModule, "level k must be positive");
    betas_ = u_->polytope().lattice_points(k_);

    KernelContext ctx(*u_);
    std::vector<AlphaData> data;
    for (std::size_t i = 0; i < betas_.size(); ++i) {
        auto a = alpha(i);
        data.push_back(ctx.prepare(a));
        l_alpha_.push_back(data.back().l);
        c_alpha_.push_back(data.back().c);
        w_alpha_.push_back(data.back().w);
    }
    auto m = moments(ctx, scheme_, data, static_cast<double>(k_), {[](std::span<const double>) { return 1.0; }},
                     options_.threads);
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (!(m[i][0] > 0.0)) fail(ErrorKind::Convergence, kModule, "section norm is not positive");
        norms_.push_back(m[i][0]);
    }
}

std::vector<double> SectionBasis::alpha(std::size_t i) const {
    std::vector<double> a(betas_[i].size());
    for (std::size_t j = 0; j < a.size(); ++j) a[j] = static_cast<double>(betas_[i][j]) / static_cast<double>(k_);
    return a;
}

RVec SectionBasis::alpha_exact(std::size_t i) const {
    RVec a(betas_[i].size());
    for (std::size_t j = 0; j < a.size(); ++j) a[j] = Rational(betas_[i][j], k_);
    return a;
}

std::size_t SectionBasis::index_of(const std::vector<std::int64_t>& beta) const {
    auto it = std::lower_bound(betas_.begin(), betas_.end(), beta);
    if (it == betas_.end() || *it != beta) fail(ErrorKind::Precondition, kModule, "lattice point is not in kP");
    return static_cast<std::size_t>(it - betas_.begin());
}

double SectionBasis::log_kernel(std::size_t i, std::span<const double> y) const {
    u_->require_interior(y);
    KernelContext ctx(*u_);
    KernelContext::Node node;
    ctx.load(y, node);
    AlphaData a;
    const auto ai = alpha(i);
    a.x = Eigen::Map<const Vec>(ai.data(), dim());
    a.l = l_alpha_[i];
    a.c = c_alpha_[i];
    a.w = w_alpha_[i];
    return -static_cast<double>(k_) * ctx.phi(a, node);
}

double SectionBasis::mass_density(std::size_t i, std::span<const double> y) const {
    return std::exp(log_kernel(i, y)) / norms_[i];
}

std::vector<double> SectionBasis::pair_sections(const std::vector<std::size_t>& indices,
                                                const TestFunction::Value& f) const {
    KernelContext ctx(*u_);
    std::vector<AlphaData> data;
    for (std::size_t i : indices) data.push_back(ctx.prepare(alpha(i)));
    auto m = moments(ctx, scheme_, data, static_cast<double>(k_),
                     {[](std::span<const double>) { return 1.0; }, f}, options_.threads);
    std::vector<double> out;
    for (const auto& row : m) out.push_back(row[1] / row[0]);
    return out;
}

double SectionBasis::pair_section(std::size_t i, const TestFunction::Value& f) const {
    return pair_sections({i}, f).front();
}

// ---------------------------------------------------------------------------------------------

double fit_slope(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) fail(ErrorKind::Precondition, kModule, "slope fit needs at least two points");
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

ExpansionCheck section_expansion_check(const SymplecticPotential& u, std::span<const double> alpha,
                                       const std::vector<std::int64_t>& ks, const TestFunction& f,
                                       ExpansionCheckOptions options) {
    const int n = u.dim();
    const Vec l = u.facet_normals() * Eigen::Map<const Vec>(alpha.data(), n) - u.facet_offsets();
    for (Eigen::Index a = 0; a < l.size(); ++a) {
        const double dist = l(a) / u.facet_normals().row(a).norm();
        if (dist < options.boundary_margin) {
            std::ostringstream os;
            os << "alpha is within " << dist << " of facet " << a << " (margin " << options.boundary_margin
               << "); only the interior expansion is implemented";
            fail(ErrorKind::Precondition, kModule, os.str());
        }
    }

    const MetricAtPoint m = u.metric(alpha);
    const double fa = f(alpha);
    const Vec df = f.gradient(alpha);
    const Mat d2f = f.hessian(alpha);
    // ∂_i∂_j(G^{ij} f) summed over i, j.
    double ddGf = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            ddGf += m.d2G[i][j](i, j) * fa + m.dG[i](i, j) * df(j) + m.dG[j](i, j) * df(i) + m.G(i, j) * d2f(i, j);
    const double first_order = m.s * fa + 0.5 * ddGf;

    auto scheme = QuadratureScheme::for_polytope(u.polytope(), options.density.quadrature);
    std::vector<double> a(alpha.begin(), alpha.end());
    ExpansionCheck out;
    out.noise_floor = options.noise_floor;
    std::vector<double> lk, lr;
    for (auto k : ks) {
        auto mom = kernel_moments(u, scheme, {a}, static_cast<double>(k),
                                  {[](std::span<const double>) { return 1.0; }, [&](std::span<const double> z) { return f(z); }},
                                  options.density.threads);
        ExpansionRow row;
        row.k = k;
        row.direct = mom[0][1] / mom[0][0];
        row.predicted = fa + first_order / (2.0 * static_cast<double>(k));
        row.residual = row.direct - row.predicted;
        if (std::abs(row.residual) > options.noise_floor) {
            lk.push_back(std::log(static_cast<double>(k)));
            lr.push_back(std::log(std::abs(row.residual)));
        }
        out.rows.push_back(row);
    }
    if (lk.size() < 2) {
        out.at_noise_floor = true;
        out.slope = std::numeric_limits<double>::quiet_NaN();
    } else {
        out.slope = fit_slope(lk, lr);
    }
    return out;
}

Integer slice_divisor(const MovingFamily& family, const Rational& t) {
    auto s = slice(family, t);
    return s.empty() ? Integer(1) : s.polytope->vertex_denominator();
}

std::vector<std::size_t> partial_indices(const SectionBasis& basis, const MovingFamily& family, const Rational& t) {
    const Integer N = slice_divisor(family, t);
    if (Integer(basis.k()) % N != 0) {
        std::ostringstream os;
        os << "kP(t) is not integral for k = " << basis.k() << ", t = " << to_string(t)
           << "; k must be a multiple of N = " << N;
        fail(ErrorKind::Precondition, kModule, os.str());
    }
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (family.min_cut(basis.alpha_exact(i)) >= t) idx.push_back(i);
    return idx;
}

double partial_density(const SectionBasis& basis, const std::vector<std::size_t>& indices, std::span<const double> y) {
    std::vector<double> terms;
    terms.reserve(indices.size());
    for (std::size_t i : indices) terms.push_back(basis.mass_density(i, y));
    return pairwise_sum(terms);
}

double partial_density(const SectionBasis& basis, const MovingFamily& family, const Rational& t,
                       std::span<const double> y) {
    return partial_density(basis, partial_indices(basis, family, t), y);
}

double pair_partial_density(const SectionBasis& basis, const std::vector<std::size_t>& indices,
                            const TestFunction::Value& f) {
    auto v = basis.pair_sections(indices, f);
    return pairwise_sum(v);
}

double integrate_partial_density(const SectionBasis& basis, const std::vector<std::size_t>& indices, int order) {
    QuadratureOptions q = basis.options().quadrature;
    q.order = order;
    const auto scheme = QuadratureScheme::for_polytope(basis.potential().polytope(), q);
    VectorIntegralOptions v;
    v.threads = basis.options().threads;
    auto r = integrate_vector(
        scheme, 1, [&](std::span<const double> y, std::vector<double>& out) { out[0] = partial_density(basis, indices, y); },
        v);
    return r.values[0];
}

const char* region_label(Region r) {
    switch (r) {
    case Region::Forbidden: return "C";
    case Region::Interface: return "N";
    case Region::Allowed: return "D";
    }
    return "?";
}

Region region_classify(const MovingFamily& family, const Rational& t, const RVec& y) {
    const Rational m = family.min_cut(y) - t;
    if (m < 0) return Region::Forbidden;
    if (m == 0) return Region::Interface;
    return Region::Allowed;
}

Region region_classify(const MovingFamily& family, const Rational& t, std::span<const double> y) {
    RVec r;
    for (double v : y) r.push_back(from_decimal(v));
    return region_classify(family, t, r);
}

std::vector<DecayPoint> decay_report(const MovingFamily& family, std::shared_ptr<const SymplecticPotential> u,
                                     const Rational& t, const std::vector<std::vector<double>>& points,
                                     const std::vector<std::int64_t>& ks, DensityOptions options) {
    std::vector<DecayPoint> out;
    for (const auto& y : points) {
        DecayPoint p;
        p.y = y;
        p.region = region_classify(family, t, y);
        if (p.region == Region::Interface)
            fail(ErrorKind::Precondition, kModule, "decay_report: point lies on the interface N(t)");
        p.ks = ks;
        out.push_back(std::move(p));
    }
    for (auto k : ks) {
        SectionBasis basis(u, k, options);
        const auto idx = partial_indices(basis, family, t);
        std::vector<char> inside(basis.size(), 0);
        for (auto i : idx) inside[i] = 1;
        for (auto& p : out) {
            std::vector<double> kept, dropped;
            for (std::size_t i = 0; i < basis.size(); ++i)
                (inside[i] ? kept : dropped).push_back(basis.mass_density(i, p.y));
            const double rho_hat = pairwise_sum(kept);
            const double rest = pairwise_sum(dropped);
            const double rho = rho_hat + rest;
            p.rho.push_back(rho);
            p.rho_hat.push_back(rho_hat);
            p.relative_gap.push_back(rest / rho);
        }
    }
    for (auto& p : out) {
        if (p.region == Region::Forbidden) {
            std::vector<double> kx, l2, lr;
            for (std::size_t j = 0; j < ks.size(); ++j) {
                kx.push_back(static_cast<double>(ks[j]));
                l2.push_back(std::log2(static_cast<double>(ks[j])));
                lr.push_back(std::log(p.rho_hat[j]));
            }
            if (ks.size() >= 2) {
                p.slope_per_k = fit_slope(kx, lr);
                p.slope_per_doubling = fit_slope(l2, lr);
            }
            p.ok = ks.size() >= 2 && p.slope_per_k < 0.0;
        } else {
            p.ok = true;
            for (std::size_t j = 1; j < p.relative_gap.size(); ++j)
                if (p.relative_gap[j] > p.relative_gap[j - 1]) p.ok = false;
        }
    }
    return out;
}

}  // namespace toric
