#pragma once

#include "toric/family.hpp"
#include "toric/potential.hpp"
#include "toric/quadrature.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace toric {

struct DensityOptions {
    QuadratureOptions quadrature;
    int threads = 1;
};

/// Smooth test function with analytic first and second derivatives.
class TestFunction {
public:
    using Value = std::function<double(std::span<const double>)>;
    using Gradient = std::function<Vec(std::span<const double>)>;
    using Hessian = std::function<Mat(std::span<const double>)>;

    TestFunction(int dim, Value v, Gradient g, Hessian h, std::string name);

    static TestFunction constant(int dim, double c);
    static TestFunction polynomial(const Polynomial& p, std::string name = "polynomial");
    /// exp(−1/(1 − |x−c|²/r²)) inside the ball, 0 outside.
    static TestFunction bump(std::vector<double> center, double radius);
    /// Σ c_i f_i.
    static TestFunction combination(const std::vector<std::pair<double, TestFunction>>& terms);

    int dim() const { return dim_; }
    const std::string& name() const { return name_; }
    double operator()(std::span<const double> x) const { return value_(x); }
    Vec gradient(std::span<const double> x) const { return gradient_(x); }
    Mat hessian(std::span<const double> x) const { return hessian_(x); }

private:
    int dim_;
    Value value_;
    Gradient gradient_;
    Hessian hessian_;
    std::string name_;
};

/// ∫_P e^{−kφ(α_i,z)} g_j(z) dz for all α_i and weights g_j; result[i][j].
/// Each α's weights form one convergence group, so every moment is accurate relative to that
/// section's mass.
std::vector<std::vector<double>> kernel_moments(const SymplecticPotential& u, const QuadratureScheme& scheme,
                                                const std::vector<std::vector<double>>& alphas, double k,
                                                const std::vector<TestFunction::Value>& weights, int threads = 1);

/// Lattice points of P at level k (α = β/k) with cached section norms ∫_P e^{−kφ(α,z)} dz.
class SectionBasis {
public:
    SectionBasis(std::shared_ptr<const SymplecticPotential> u, std::int64_t k, DensityOptions options = {});

    std::int64_t k() const { return k_; }
    int dim() const { return u_->dim(); }
    std::size_t size() const { return betas_.size(); }
    const SymplecticPotential& potential() const { return *u_; }
    const QuadratureScheme& scheme() const { return scheme_; }
    const DensityOptions& options() const { return options_; }

    const std::vector<std::int64_t>& beta(std::size_t i) const { return betas_[i]; }
    std::vector<double> alpha(std::size_t i) const;
    RVec alpha_exact(std::size_t i) const;
    /// Index of the lattice point β, or throws Error(Precondition) if β ∉ kP.
    std::size_t index_of(const std::vector<std::int64_t>& beta) const;

    const std::vector<double>& norms() const { return norms_; }
    double norm(std::size_t i) const { return norms_[i]; }

    /// −kφ(α_i, y).
    double log_kernel(std::size_t i, std::span<const double> y) const;
    /// |e_{α,k}(y)|² in the pushed-down normalization: e^{−kφ(α,y)} / ∫ e^{−kφ(α,·)}.
    double mass_density(std::size_t i, std::span<const double> y) const;

    /// ⟨|e_{α_i,k}|², f⟩ for each requested index.
    std::vector<double> pair_sections(const std::vector<std::size_t>& indices, const TestFunction::Value& f) const;
    double pair_section(std::size_t i, const TestFunction::Value& f) const;

private:
    std::shared_ptr<const SymplecticPotential> u_;
    std::int64_t k_;
    DensityOptions options_;
    QuadratureScheme scheme_;
    std::vector<std::vector<std::int64_t>> betas_;
    std::vector<double> norms_;
    // Per lattice point: facet values ℓ_a(α), the constant Σ(ℓ log ℓ − ℓ), and w data.
    std::vector<Vec> l_alpha_;
    std::vector<double> c_alpha_;
    std::vector<double> w_alpha_;
};

struct ExpansionRow {
    std::int64_t k = 0;
    double direct = 0.0;      // ⟨|e_{α,k}|², f⟩
    double predicted = 0.0;   // f(α) + (1/2k)(s f + ½ ∂_i∂_j(G^{ij} f))(α)
    double residual = 0.0;
};

struct ExpansionCheck {
    std::vector<ExpansionRow> rows;
    double slope = 0.0;        // least-squares slope of log|residual| against log k
    double noise_floor = 0.0;  // residuals below this are quadrature noise
    bool at_noise_floor = false;
};

struct ExpansionCheckOptions {
    DensityOptions density;
    double boundary_margin = 0.05;
    double noise_floor = 1e-11;
};

/// First-order interior expansion of ⟨|e_{α,k}|², f⟩ at a fixed interior α over a k-grid.
/// α need not be a lattice point.
ExpansionCheck section_expansion_check(const SymplecticPotential& u, std::span<const double> alpha,
                                       const std::vector<std::int64_t>& ks, const TestFunction& f,
                                       ExpansionCheckOptions options = {});

/// Indices of the basis elements with α ∈ P(t). Requires kP(t) integral; the error names the divisor.
std::vector<std::size_t> partial_indices(const SectionBasis& basis, const MovingFamily& family, const Rational& t);

/// Smallest N ≥ 1 such that N·P(t) is integral (1 when P(t) is empty).
Integer slice_divisor(const MovingFamily& family, const Rational& t);

/// ρ̂_tk(y) = Σ_{α ∈ P(t)} |e_{α,k}(y)|²; with t = 0 this is the full density ρ_k.
double partial_density(const SectionBasis& basis, const std::vector<std::size_t>& indices, std::span<const double> y);
double partial_density(const SectionBasis& basis, const MovingFamily& family, const Rational& t,
                       std::span<const double> y);

/// ⟨ρ̂_tk, f⟩.
double pair_partial_density(const SectionBasis& basis, const std::vector<std::size_t>& indices,
                            const TestFunction::Value& f);

/// ∫_P ρ̂_tk dy by direct quadrature of the summed densities, on a rule of a different order from the
/// one behind the cached norms. Equals |indices| when the norms are accurate.
double integrate_partial_density(const SectionBasis& basis, const std::vector<std::size_t>& indices, int order = 9);

enum class Region { Forbidden, Interface, Allowed };  // C(t), N(t), D(t)
const char* region_label(Region r);                    // "C", "N", "D"

/// Exact sign test on min_a Φ_a(y) − t.
Region region_classify(const MovingFamily& family, const Rational& t, const RVec& y);
Region region_classify(const MovingFamily& family, const Rational& t, std::span<const double> y);

struct DecayPoint {
    std::vector<double> y;
    Region region = Region::Allowed;
    std::vector<std::int64_t> ks;
    std::vector<double> rho;
    std::vector<double> rho_hat;
    double slope_per_k = 0.0;         // least-squares slope of log ρ̂ against k (forbidden points)
    double slope_per_doubling = 0.0;  // least-squares slope of log ρ̂ against log₂ k
    std::vector<double> relative_gap; // |ρ̂ − ρ|/ρ (allowed points)
    bool ok = false;
};

/// Forbidden points must decay (negative slope); allowed points must show a decreasing relative gap.
/// Interface points are rejected with Error(Precondition).
std::vector<DecayPoint> decay_report(const MovingFamily& family, std::shared_ptr<const SymplecticPotential> u,
                                     const Rational& t, const std::vector<std::vector<double>>& points,
                                     const std::vector<std::int64_t>& ks, DensityOptions options = {});

/// Least-squares slope of y against x.
double fit_slope(std::span<const double> x, std::span<const double> y);

}  // namespace toric
