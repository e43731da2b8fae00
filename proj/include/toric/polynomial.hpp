#pragma once

#include <span>
#include <vector>

namespace toric {

struct Monomial {
    std::vector<int> exponents;
    double coeff = 0.0;
};

/// Real multivariate polynomial Σ c·x^e, used for potential perturbations and test functions.
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(int dim, std::vector<Monomial> terms);

    static Polynomial zero(int dim) { return Polynomial(dim, {}); }

    int dim() const { return dim_; }
    const std::vector<Monomial>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    double operator()(std::span<const double> x) const;

    /// ∂/∂x_var.
    Polynomial derivative(int var) const;

    Polynomial operator*(double s) const;

private:
    int dim_ = 0;
    std::vector<Monomial> terms_;
};

}  // namespace toric
