#include "toric/quadrature.hpp"

#include "toric/exact_linalg.hpp"

#include <Eigen/Dense>

#include <numbers>
#include <numeric>

namespace toric {

namespace {

constexpr const char* kModule = "density";

using DSimplex = std::vector<std::vector<double>>;

std::vector<double> midpoint(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> m(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) m[i] = 0.5 * (a[i] + b[i]);
    return m;
}

// Red refinement: 2^d congruent-volume children.
std::vector<DSimplex> refine(const DSimplex& s) {
    const int d = static_cast<int>(s.size()) - 1;
    switch (d) {
    case 0:
        return {s};
    case 1: {
        auto m = midpoint(s[0], s[1]);
        return {{s[0], m}, {m, s[1]}};
    }
    case 2: {
        auto m01 = midpoint(s[0], s[1]), m02 = midpoint(s[0], s[2]), m12 = midpoint(s[1], s[2]);
        return {{s[0], m01, m02}, {m01, s[1], m12}, {m02, m12, s[2]}, {m01, m12, m02}};
    }
    case 3: {
        auto m01 = midpoint(s[0], s[1]), m02 = midpoint(s[0], s[2]), m03 = midpoint(s[0], s[3]);
        auto m12 = midpoint(s[1], s[2]), m13 = midpoint(s[1], s[3]), m23 = midpoint(s[2], s[3]);
        return {{s[0], m01, m02, m03}, {m01, s[1], m12, m13}, {m02, m12, s[2], m23}, {m03, m13, m23, s[3]},
                {m01, m02, m03, m13},  {m01, m02, m12, m13},  {m02, m03, m13, m23}, {m02, m12, m13, m23}};
    }
    default:
        fail(ErrorKind::Precondition, kModule, "simplex refinement is implemented for dimension <= 3");
    }
}

double euclidean_volume(const DSimplex& s) {
    const int d = static_cast<int>(s.size()) - 1;
    if (d == 0) return 1.0;
    const int m = static_cast<int>(s[0].size());
    Eigen::MatrixXd e(m, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < m; ++i) e(i, j) = s[j + 1][i] - s[0][i];
    double gram = (e.transpose() * e).determinant();
    double fact = 1.0;
    for (int i = 2; i <= d; ++i) fact *= i;
    return std::sqrt(std::max(gram, 0.0)) / fact;
}

}  // namespace

void gauss_legendre_01(int order, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(order, 0.0);
    weights.assign(order, 0.0);
    for (int i = 0; i < order; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Recompute the derivative at the converged root.
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= order; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = order * (x * p1 - p0) / (x * x - 1.0);
        nodes[i] = 0.5 * (1.0 - x);
        weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);  // 2/((1−x²)P'²) scaled to [0,1]
    }
}

SimplexRule collapsed_gauss_rule(int dim, int order) {
    SimplexRule rule;
    rule.dim = dim;
    if (dim == 0) {
        rule.barycentric = {{1.0}};
        rule.weights = {1.0};
        return rule;
    }
    std::vector<double> x, w;
    gauss_legendre_01(order, x, w);
    double fact = 1.0;
    for (int i = 2; i <= dim; ++i) fact *= i;

    std::vector<int> idx(dim, 0);
    while (true) {
        // ξ_1 = u_1, ξ_2 = (1−u_1)u_2, …; Jacobian Π (1−u_i)^{d−i}.
        std::vector<double> bary(dim + 1);
        double remaining = 1.0, weight = fact;
        for (int i = 0; i < dim; ++i) {
            double u = x[idx[i]];
            bary[i + 1] = remaining * u;
            weight *= w[idx[i]] * std::pow(1.0 - u, dim - 1 - i);
            remaining *= 1.0 - u;
        }
        bary[0] = remaining;
        rule.barycentric.push_back(std::move(bary));
        rule.weights.push_back(weight);
        int j = dim - 1;
        while (j >= 0 && idx[j] == order - 1) idx[j--] = 0;
        if (j < 0) break;
        ++idx[j];
    }
    return rule;
}

QuadratureScheme::QuadratureScheme(std::vector<Simplex> simplices, QuadratureOptions options)
    : simplices_(std::move(simplices)), options_(options), cache_(std::make_shared<Cache>()) {
    if (simplices_.empty()) fail(ErrorKind::Precondition, kModule, "quadrature scheme without simplices");
    dim_ = static_cast<int>(simplices_.front().size()) - 1;
    ambient_ = static_cast<int>(simplices_.front().front().size());
    if (options_.order < 1 || options_.max_depth < options_.start_depth || options_.start_depth < 0)
        fail(ErrorKind::Precondition, kModule, "invalid quadrature options");
    rule_ = collapsed_gauss_rule(dim_, options_.order);
}

QuadratureScheme QuadratureScheme::for_polytope(const Polytope& p, QuadratureOptions options) {
    auto simplices = p.triangulate();
    Rational total = 0;
    for (const auto& s : simplices) {
        exact::Matrix m;
        for (std::size_t i = 1; i < s.size(); ++i) {
            RVec row(p.dim());
            for (int j = 0; j < p.dim(); ++j) row[j] = s[i][j] - s[0][j];
            m.push_back(std::move(row));
        }
        Rational det = abs(exact::determinant(std::move(m)));
        for (int i = 2; i <= p.dim(); ++i) det /= i;
        total += det;
    }
    if (total != p.volume()) fail(ErrorKind::Precondition, kModule, "simplex volumes do not sum to Vol(P)");
    return QuadratureScheme(std::move(simplices), options);
}

QuadratureScheme QuadratureScheme::for_face(const Polytope& p, const Face& face, QuadratureOptions options) {
    return QuadratureScheme(p.triangulate(face), options);
}

const NodeSet& QuadratureScheme::nodes(int depth) const {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    if (static_cast<int>(cache_->levels.size()) <= depth) cache_->levels.resize(depth + 1);
    auto& slot = cache_->levels[depth];
    if (slot) return *slot;

    std::vector<DSimplex> current;
    for (const auto& s : simplices_) {
        DSimplex ds;
        for (const auto& v : s) ds.push_back(to_double(v));
        current.push_back(std::move(ds));
    }
    for (int level = 0; level < depth && dim_ > 0; ++level) {
        std::vector<DSimplex> next;
        next.reserve(current.size() << dim_);
        for (const auto& s : current)
            for (auto& c : refine(s)) next.push_back(std::move(c));
        current.swap(next);
    }

    auto ns = std::make_unique<NodeSet>();
    ns->ambient = ambient_;
    ns->points.reserve(current.size() * rule_.weights.size() * ambient_);
    for (const auto& s : current) {
        const double vol = euclidean_volume(s);
        for (std::size_t q = 0; q < rule_.weights.size(); ++q) {
            for (int i = 0; i < ambient_; ++i) {
                double xi = 0.0;
                for (int v = 0; v <= dim_; ++v) xi += rule_.barycentric[q][v] * s[v][i];
                ns->points.push_back(xi);
            }
            ns->weights.push_back(vol * rule_.weights[q]);
        }
    }
    slot = std::move(ns);
    return *slot;
}

ScalarIntegral integrate(const QuadratureScheme& scheme, const ScalarField& f, int threads) {
    VectorIntegralOptions vopt;
    vopt.threads = threads;
    auto r = integrate_vector(
        scheme, 1, [&](std::span<const double> x, std::vector<double>& out) { out[0] = f(x); }, vopt);
    return {r.values[0], r.delta[0], r.depth};
}

ScalarIntegral integrate(const Polytope& p, const ScalarField& f, QuadratureOptions options) {
    return integrate(QuadratureScheme::for_polytope(p, options), f);
}

double integrate_1d(const std::function<double(double)>& f, double a, double b, double tolerance, int order,
                    int max_depth) {
    if (b <= a) return 0.0;
    std::vector<double> x, w;
    gauss_legendre_01(order, x, w);
    auto panel_sum = [&](int panels) {
        std::vector<double> terms;
        terms.reserve(static_cast<std::size_t>(panels) * order);
        const double h = (b - a) / panels;
        for (int p = 0; p < panels; ++p)
            for (int q = 0; q < order; ++q) terms.push_back(h * w[q] * f(a + h * (p + x[q])));
        return pairwise_sum(terms);
    };
    double prev = panel_sum(1);
    for (int depth = 1; depth <= max_depth; ++depth) {
        double cur = panel_sum(1 << depth);
        if (std::abs(cur - prev) <= tolerance * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    throw ConvergenceError(kModule, "1-D quadrature did not converge", prev, 0.0);
}

}  // namespace toric
