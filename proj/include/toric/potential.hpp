#pragma once

#include "toric/polynomial.hpp"
#include "toric/polytope.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace toric {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Metric data at one interior point. dG[k] = ∂_k G and d2G[k][l] = ∂_k∂_l G.
struct MetricAtPoint {
    Vec x;
    Mat H;
    Mat G;
    std::vector<Mat> dG;
    std::vector<std::vector<Mat>> d2G;
    double s = 0.0;
};

struct PotentialOptions {
    int convexity_grid = 11;  // points per axis of the positive-definiteness sample
};

/// u = u₀ + w with u₀ = ½ Σ_a ℓ_a log ℓ_a over the facets of P (primitive conormals) and w polynomial.
class SymplecticPotential {
public:
    explicit SymplecticPotential(Polytope p, Polynomial w = {}, PotentialOptions options = {});

    const Polytope& polytope() const { return polytope_; }
    const Polynomial& perturbation() const { return w_; }
    int dim() const { return polytope_.dim(); }

    /// Facet functionals in primitive form: rows are ν_a, entries of offsets are λ_a.
    const Mat& facet_normals() const { return normals_; }
    const Vec& facet_offsets() const { return offsets_; }

    /// u(x) for x ∈ P, using ℓ log ℓ = 0 on the boundary.
    double value(std::span<const double> x) const;
    Vec gradient(std::span<const double> x) const;

    Mat hessian(std::span<const double> x) const;
    Mat inverse_metric(std::span<const double> x) const;
    MetricAtPoint metric(std::span<const double> x) const;

    /// Abreu: s = −½ Σ_ij ∂_i∂_j G^{ij}, from the analytic derivatives of G.
    double scalar_curvature(std::span<const double> x) const;
    /// Same quantity from central differences of G with step h (test oracle).
    double scalar_curvature_fd(std::span<const double> x, double h = 1e-4) const;

    /// φ(x,y) = 2(u(x) − u(y) − ⟨∇u(y), x − y⟩) for x ∈ P, y interior.
    double phi(std::span<const double> x, std::span<const double> y) const;

    /// |df|²_g = ∇fᵀ G(x) ∇f.
    double conorm_sq(const AffineFunctional& f, std::span<const double> x) const;
    double conorm_sq(const Vec& covector, std::span<const double> x) const;

    /// Throws Error(Precondition) naming the first facet with ℓ_a(x) ≤ 0.
    void require_interior(std::span<const double> x) const;

private:
    Vec facet_values(std::span<const double> x) const;
    Mat hessian_from(std::span<const double> x, const Vec& l) const;
    template <class T>
    MetricAtPoint metric_in(std::span<const double> x) const;

    Polytope polytope_;
    Polynomial w_;
    Mat normals_;
    Vec offsets_;
    // Derivatives of w: grad[i], hess[i][j], third[i][j][k], fourth[i][j][k][l] (flattened).
    std::vector<Polynomial> dw_, d2w_, d3w_, d4w_;
};

}  // namespace toric
