#pragma once

#include "toric/asymptotics.hpp"
#include "toric/family.hpp"
#include "toric/lattice_poly.hpp"
#include "toric/potential.hpp"

#include <string>
#include <vector>

namespace toric {

struct HilbertCoefficients {
    Rational t;
    Rational A0;  // kⁿ coefficient of N(kP(t)); equals Vol(P(t))
    Rational A1;  // k^{n−1} coefficient
    CountPolynomial counts;
};

/// Exact interpolation of N(kP(t)) on k = N, 2N, … (N the vertex denominator of P(t)).
HilbertCoefficients hilbert_coeffs_combinatorial(const MovingFamily& family, const Rational& t, int extra = 1);

struct GeometricHilbert {
    double A0 = 0.0;  // Vol(P(t))
    double A1 = 0.0;  // ½(∫_{P(t)} s + ⟨â_t, 1⟩)
};
GeometricHilbert hilbert_coeffs_geometric(const MovingFamily& family, const SymplecticPotential& u, const Rational& t,
                                          const AsymptoticsOptions& opt);

/// μ(X) = A1/A0 of the Hilbert polynomial of P.
Rational slope_mu(const Polytope& p);

/// Av(s) = ∫_P s / Vol(P).
double average_scalar_curvature(const SymplecticPotential& u, const QuadratureOptions& quad = {}, int threads = 1);

/// A0(t), A1(t) as exact polynomials on each regularity interval [c_i, c_{i+1}].
struct HilbertFunctions {
    std::vector<Rational> breaks;  // critical values
    std::vector<RPoly> A0, A1;     // one piece per interval
};
HilbertFunctions hilbert_functions(const MovingFamily& family);

/// μ_c = ∫₀^c (A1 + A0′/2) dt / ∫₀^c A0 dt, exactly. Requires 0 < c ≤ the top critical value.
Rational slope_mu_c(const MovingFamily& family, const Rational& c);
Rational slope_mu_c(const HilbertFunctions& h, const Rational& c);

struct MetricSlopeExcess {
    double volume_integral = 0.0;    // ∫₀^c Vol(P(t)) dt
    double curvature_integral = 0.0; // ∫₀^c ∫_{P(t)} (s − Av s) dx dt
    double surface_term = 0.0;       // ∫_{S_c} |dΦ|²_g dσ_c
    double excess = 0.0;             // (curvature_integral − ½ surface_term) / (2 volume_integral)
};

/// μ_c − μ(X) from the metric side. Single-cut families; c regular.
MetricSlopeExcess slope_excess_metric(const MovingFamily& family, const SymplecticPotential& u, const Rational& c,
                                      const AsymptoticsOptions& opt);

struct SlopeReport {
    Rational c;
    Rational mu_c;
    Rational mu_X;
    Rational excess;
    MetricSlopeExcess metric;
    std::string verdict;  // "stable", "semistable", "violated"
};

SlopeReport slope_report(const MovingFamily& family, const SymplecticPotential& u, const Rational& c,
                         const AsymptoticsOptions& opt);

struct FutakiCombinatorial {
    Rational F0;
    Rational F1;
    RPoly w;  // w_k = N(kΓ) − N(kP) as a polynomial in k
    RPoly d;  // d_k = N(kP)
    std::vector<std::int64_t> ks;
};

/// Coefficient of k⁻¹ in w_k/(k d_k), from exact interpolation on k ≡ 0 mod N.
FutakiCombinatorial futaki_combinatorial(const TestConfigPolytope& config, int extra = 1);

struct DeltaGamma {
    double dp_tilde = 0.0;         // ∫ over the roof ridges of |dΦ_a − dΦ_b|²_g dτ̃_ab
    double dp_tilde_sliced = 0.0;  // ∫₀^{c_m} (∫_{N(t)} dp) dt plus the horizontal ridges
    Rational volume_gamma;
    double delta = 0.0;            // coefficient · dp_tilde / Vol(Γ)
};

DeltaGamma delta_gamma(const TestConfigPolytope& config, const SymplecticPotential& u, const AsymptoticsOptions& opt);

/// ∫_Γ pr₁*s = Σ_a ∫_{P_a} s·Φ_a over the cells P_a = {Φ_a ≤ Φ_b for all b}.
double gamma_scalar_integral(const TestConfigPolytope& config, const SymplecticPotential& u,
                             const QuadratureOptions& quad, int threads = 1);

struct FutakiReport {
    std::string name;
    bool is_product = false;
    Rational F1_combinatorial;
    double F1_metric = 0.0;
    DeltaGamma delta;
    Rational volume_p;
    double average_gamma = 0.0;
    double average_p = 0.0;
    Rational side_volume;          // Vol(∂Γ⁺), lattice Leray measure
    double gamma_scalar = 0.0;     // ∫_Γ pr₁*s
    double roof_residual = 0.0;    // Vol(∂Γ⁺) − (∫_Γ pr₁*s − c ∫dp̃)
    std::string verdict;           // "negative", "zero-product", "violation"
    std::string error;             // set when the configuration could not be evaluated
};

double futaki_metric(const TestConfigPolytope& config, const SymplecticPotential& u, const AsymptoticsOptions& opt);

FutakiReport futaki_report(const TestConfigPolytope& config, const SymplecticPotential& u,
                           const AsymptoticsOptions& opt, std::string name = {});

/// One report per configuration; failures are recorded in FutakiReport::error rather than thrown.
std::vector<FutakiReport> polystability_report(const SymplecticPotential& u,
                                               const std::vector<std::pair<std::string, MovingFamily>>& configs,
                                               const AsymptoticsOptions& opt);

}  // namespace toric
