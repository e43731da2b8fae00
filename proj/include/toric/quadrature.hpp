#pragma once

#include "toric/error.hpp"
#include "toric/parallel.hpp"
#include "toric/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

namespace toric {

struct QuadratureOptions {
    int order = 12;          // Gauss–Legendre points per collapsed coordinate
    int start_depth = 1;     // first dyadic refinement level tried
    int max_depth = 8;
    double tolerance = 1e-8; // relative change between successive levels
    double absolute_tolerance = 0.0;  // floor for integrands that cancel to (nearly) zero
};

/// Gauss–Legendre nodes and weights on [0, 1].
void gauss_legendre_01(int order, std::vector<double>& nodes, std::vector<double>& weights);

/// Collapsed-coordinate product rule on the reference d-simplex. Barycentric nodes, weights summing to 1.
/// Every node is strictly interior.
struct SimplexRule {
    int dim = 0;
    std::vector<std::vector<double>> barycentric;
    std::vector<double> weights;
};
SimplexRule collapsed_gauss_rule(int dim, int order);

/// Quadrature nodes with absolute weights (weights sum to the measure of the region).
struct NodeSet {
    int ambient = 0;
    std::vector<double> points;   // size() · ambient, row-major
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }
    std::span<const double> point(std::size_t i) const {
        return {points.data() + i * static_cast<std::size_t>(ambient), static_cast<std::size_t>(ambient)};
    }
};

/// A region decomposed into d-simplices in ℝ^m, with a fixed interior rule and uniform dyadic refinement.
/// Weights carry Euclidean d-dimensional measure.
class QuadratureScheme {
public:
    QuadratureScheme(std::vector<Simplex> simplices, QuadratureOptions options = {});

    /// Centroid-fan decomposition of a full-dimensional polytope. Checks that the simplex volumes sum
    /// to Vol(P) exactly.
    static QuadratureScheme for_polytope(const Polytope& p, QuadratureOptions options = {});
    static QuadratureScheme for_face(const Polytope& p, const Face& face, QuadratureOptions options = {});

    int simplex_dim() const { return dim_; }
    int ambient_dim() const { return ambient_; }
    const QuadratureOptions& options() const { return options_; }
    const std::vector<Simplex>& simplices() const { return simplices_; }

    /// Node set after `depth` rounds of refinement. Built once per depth; safe to call concurrently.
    const NodeSet& nodes(int depth) const;

private:
    std::vector<Simplex> simplices_;
    QuadratureOptions options_;
    int dim_ = 0;
    int ambient_ = 0;
    SimplexRule rule_;
    struct Cache {
        std::mutex mutex;
        std::vector<std::unique_ptr<NodeSet>> levels;
    };
    std::shared_ptr<Cache> cache_;
};

struct IntegralResult {
    std::vector<double> values;
    std::vector<double> delta;  // |I_L − I_{L−1}| per component at acceptance
    int depth = 0;
};

struct VectorIntegralOptions {
    int threads = 1;
    /// Components are split into consecutive groups of this size; a component is converged when its
    /// change is below tolerance times the largest ∫|f_c| of its group.
    int group_size = 1;
    const char* module = "density";
};

/// Adaptive vector-valued integration. f(x, out) writes `components` values at x.
/// Nodes are processed in fixed chunks whose partial sums are combined pairwise, so the result does not
/// depend on the thread count. Throws ConvergenceError at max depth.
template <class F>
IntegralResult integrate_vector(const QuadratureScheme& scheme, int components, F&& f,
                                VectorIntegralOptions vopt = {}) {
    constexpr std::size_t kChunk = 256;
    const auto& opt = scheme.options();
    const int group = std::max(1, vopt.group_size);

    auto evaluate = [&](int depth, std::vector<double>& value, std::vector<double>& l1) {
        const NodeSet& ns = scheme.nodes(depth);
        const std::size_t chunks = (ns.size() + kChunk - 1) / kChunk;
        auto partial = parallel_map<std::vector<double>>(chunks, vopt.threads, [&](std::size_t c) {
            std::vector<double> acc(2 * static_cast<std::size_t>(components), 0.0);
            std::vector<double> out(components);
            const std::size_t end = std::min(ns.size(), (c + 1) * kChunk);
            for (std::size_t i = c * kChunk; i < end; ++i) {
                f(ns.point(i), out);
                for (int k = 0; k < components; ++k) {
                    const double term = ns.weights[i] * out[k];
                    acc[k] += term;
                    acc[components + k] += std::abs(term);
                }
            }
            return acc;
        });
        value.assign(components, 0.0);
        l1.assign(components, 0.0);
        std::vector<double> column(chunks);
        for (int k = 0; k < 2 * components; ++k) {
            for (std::size_t c = 0; c < chunks; ++c) column[c] = partial[c][k];
            const double s = pairwise_sum(column);
            if (k < components) value[k] = s;
            else l1[k - components] = s;
        }
    };

    IntegralResult r;
    std::vector<double> prev, prev_l1, cur, cur_l1;
    int depth = opt.start_depth;
    evaluate(depth, prev, prev_l1);
    while (true) {
        if (depth >= opt.max_depth) {
            throw ConvergenceError(vopt.module,
                                   "adaptive quadrature did not converge by depth " + std::to_string(opt.max_depth),
                                   prev.empty() ? 0.0 : prev[0], r.delta.empty() ? 0.0 : r.delta[0]);
        }
        ++depth;
        evaluate(depth, cur, cur_l1);
        r.delta.assign(components, 0.0);
        bool done = true;
        for (int g0 = 0; g0 < components; g0 += group) {
            const int g1 = std::min(components, g0 + group);
            double scale = 0.0;
            for (int k = g0; k < g1; ++k) scale = std::max(scale, cur_l1[k]);
            for (int k = g0; k < g1; ++k) {
                r.delta[k] = std::abs(cur[k] - prev[k]);
                if (r.delta[k] > std::max(opt.tolerance * scale, opt.absolute_tolerance)) done = false;
            }
        }
        prev.swap(cur);
        prev_l1.swap(cur_l1);
        if (done) break;
    }
    r.values = prev;
    r.depth = depth;
    return r;
}

using ScalarField = std::function<double(std::span<const double>)>;

struct ScalarIntegral {
    double value = 0.0;
    double delta = 0.0;
    int depth = 0;
};

ScalarIntegral integrate(const QuadratureScheme& scheme, const ScalarField& f, int threads = 1);
ScalarIntegral integrate(const Polytope& p, const ScalarField& f, QuadratureOptions options = {});

/// Adaptive Gauss–Legendre on [a, b] by interval halving; for t-integrals of smooth pieces.
double integrate_1d(const std::function<double(double)>& f, double a, double b, double tolerance = 1e-10,
                    int order = 10, int max_depth = 12);

}  // namespace toric
