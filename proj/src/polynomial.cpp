#include "toric/polynomial.hpp"

#include "toric/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace toric {

Polynomial::Polynomial(int dim, std::vector<Monomial> terms) : dim_(dim) {
    // Merge equal exponent vectors so that derivative chains stay small.
    std::map<std::vector<int>, double> merged;
    for (auto& m : terms) {
        if (static_cast<int>(m.exponents.size()) != dim)
            fail(ErrorKind::Parse, "potential", "monomial exponent vector has the wrong length");
        if (std::any_of(m.exponents.begin(), m.exponents.end(), [](int e) { return e < 0; }))
            fail(ErrorKind::Parse, "potential", "negative exponent in monomial");
        merged[m.exponents] += m.coeff;
    }
    for (auto& [e, c] : merged)
        if (c != 0.0) terms_.push_back({e, c});
}

double Polynomial::operator()(std::span<const double> x) const {
    double s = 0.0;
    for (const auto& m : terms_) {
        double v = m.coeff;
        for (int j = 0; j < dim_; ++j)
            for (int p = 0; p < m.exponents[j]; ++p) v *= x[j];
        s += v;
    }
    return s;
}

Polynomial Polynomial::derivative(int var) const {
    std::vector<Monomial> out;
    for (const auto& m : terms_) {
        if (m.exponents[var] == 0) continue;
        Monomial d = m;
        d.coeff *= m.exponents[var];
        d.exponents[var] -= 1;
        out.push_back(std::move(d));
    }
    return Polynomial(dim_, std::move(out));
}

Polynomial Polynomial::operator*(double s) const {
    std::vector<Monomial> out = terms_;
    for (auto& m : out) m.coeff *= s;
    return Polynomial(dim_, std::move(out));
}

}  // namespace toric
