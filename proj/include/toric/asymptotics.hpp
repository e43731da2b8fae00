#pragma once

#include "toric/density.hpp"
#include "toric/family.hpp"
#include "toric/lattice_poly.hpp"
#include "toric/potential.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace toric {

/// Coefficient of the corner measure dp (and of dp̃ in Δ(Γ)).
/// Corrected: ½, the value forced by exact lattice counts. Printed: 1 everywhere, as typeset.
enum class DpConvention { Corrected, Printed };

const char* to_string(DpConvention c);
DpConvention parse_dp_convention(const std::string& s);
double dp_coefficient(DpConvention c);

struct AsymptoticsOptions {
    QuadratureOptions quadrature;
    int threads = 1;
    Rational h_t = Rational(1, 1000);  // central-difference step in t
    DpConvention convention = DpConvention::Corrected;
    double noise_floor = 1e-10;  // relative size below which a residual is treated as quadrature noise
};

// ---------------------------------------------------------------------------------------------
// Euler–Maclaurin

struct EulerMaclaurinExact {
    std::int64_t k = 0;
    Integer lattice_sum;
    Rational approx;    // kⁿ Vol(P) + ½ k^{n−1} Vol(∂P) in the lattice Leray measure
    Rational residual;
};

/// f = 1, in exact arithmetic. Requires kP integral.
EulerMaclaurinExact euler_maclaurin(const Polytope& p, std::int64_t k);

struct EulerMaclaurinRow {
    std::int64_t k = 0;
    double lattice_sum = 0.0;
    double approx = 0.0;
    double residual = 0.0;
};

EulerMaclaurinRow euler_maclaurin(const Polytope& p, const TestFunction::Value& f, std::int64_t k,
                                  const QuadratureOptions& quad = {});

// ---------------------------------------------------------------------------------------------
// Integrals over faces of P(t)

/// ∫ over a face of p in Euclidean measure of the face's own dimension.
double face_integral(const Polytope& p, const Face& face, const TestFunction::Value& f, const QuadratureOptions& quad,
                     int threads = 1);

/// ∫_{P(t)} f dx.
double slice_integral(const MovingFamily& family, const Rational& t, const TestFunction::Value& f,
                      const QuadratureOptions& quad, int threads = 1);

enum class FacetWeight { One, ConormSq };  // 1 or |dΦ_a|²_g
enum class LerayChoice { Cut, Primitive }; // dσ dΦ_a = dx, or the same with Φ_a rescaled to a primitive normal

/// ∫_{N(t)} f·weight dσ summed over the active cuts. t must be regular.
double facet_integral(const MovingFamily& family, const SymplecticPotential& u, const Rational& t,
                      const TestFunction::Value& f, FacetWeight weight, const AsymptoticsOptions& opt,
                      LerayChoice leray = LerayChoice::Cut);

/// ∫_{N(t)} f dp: over codimension-2 faces N_a ∩ N_b, f·|dΦ_a − dΦ_b|²_g dτ_ab.
double dp_integral(const MovingFamily& family, const SymplecticPotential& u, const Rational& t,
                   const TestFunction::Value& f, const AsymptoticsOptions& opt);

/// Parts of ⟨â_t, f⟩.
struct BoundaryDistribution {
    Rational t;
    double facet_term = 0.0;       // ∫_N f dσ (lattice Leray form)
    double derivative_term = 0.0;  // −½ d/dt ∫_N f|dΦ|²_g dσ
    double corner_term = 0.0;      // −c ∫_N f dp, c = ½ (corrected) or 1 (printed)
    double value() const { return facet_term + derivative_term + corner_term; }
};

/// Throws Error(Precondition) when t is critical or the stencil [t−h, t+h] contains a critical value.
BoundaryDistribution a_hat_pair(const MovingFamily& family, const SymplecticPotential& u, const Rational& t,
                                const TestFunction::Value& f, const AsymptoticsOptions& opt);

struct ExpansionResidual {
    std::int64_t k = 0;
    double direct = 0.0;      // ⟨ρ̂_tk, f⟩
    double asymptotic = 0.0;  // kⁿ[∫_{P(t)} f + (1/2k)(∫_{P(t)} s f + ⟨â_t, f⟩)]
    double residual = 0.0;
};

struct ExpansionTable {
    std::vector<ExpansionResidual> rows;
    double slope = 0.0;  // least-squares slope of log|residual| against log k, over rows above the noise floor
    bool at_noise_floor = false;  // fewer than two residuals exceed noise_floor·max(1, |direct|)
};

ExpansionTable expansion_residual(const MovingFamily& family, std::shared_ptr<const SymplecticPotential> u,
                                  const Rational& t, const TestFunction::Value& f, const std::vector<std::int64_t>& ks,
                                  const AsymptoticsOptions& opt);

struct BoundaryVolumeCheck {
    Rational t;
    Rational old_boundary_volume;  // Vol(∂P(t)⁺), exact, lattice Leray measure
    double scalar_integral = 0.0;  // ∫_{P(t)} s
    double derivative_term = 0.0;  // d/dt ∫_N |dΦ|²_g dσ
    double dp_term = 0.0;          // ∫_N dp
    double residual = 0.0;
};

/// Vol(∂P(t)⁺) − [∫_{P(t)} s − a·d/dt ∫_N |dΦ|² dσ − c·∫_N dp] with (a, c) = (½, ½) corrected or (1, 1)
/// printed. t = 0 is accepted and treated as N = ∅.
BoundaryVolumeCheck boundary_volume_identity(const MovingFamily& family, const SymplecticPotential& u,
                                             const Rational& t, const AsymptoticsOptions& opt);

struct DivergenceCheck {
    double divergence = 0.0;  // ∫_W div ξ dσ
    double derivative = 0.0;  // d/dt ∫_W ⟨ξ, dΦ⟩ dσ
    double flux = 0.0;        // ∫_{∂W} ⟨ξ, ν⟩ dτ
    double residual = 0.0;
};

/// Single-cut families only; W(t) = {Φ = t} ∩ P, ν the primitive inward conormal of the facet of P
/// met along ∂W, and dτ the Leray form of (Φ, ℓ_b).
DivergenceCheck divergence_identity_check(const MovingFamily& family, const Rational& t,
                                          const std::vector<Polynomial>& xi, const AsymptoticsOptions& opt);

/// Throws Error(Precondition) unless [t − h, t + h] is free of critical values (h = 0 checks t only).
void require_regular(const MovingFamily& family, const Rational& t, const Rational& h, const char* module);

}  // namespace toric
