#include "toric/family.hpp"

#include "toric/error.hpp"

#include <algorithm>
#include <limits>

namespace toric {

namespace {
constexpr const char* kModule = "polytope_core";
}

MovingFamily::MovingFamily(Polytope base, std::vector<AffineFunctional> cuts)
    : base_(std::move(base)), cuts_(std::move(cuts)) {
    if (cuts_.empty()) fail(ErrorKind::Precondition, kModule, "a moving family needs at least one cut");
    for (std::size_t a = 0; a < cuts_.size(); ++a) {
        if (cuts_[a].dim() != base_.dim())
            fail(ErrorKind::Precondition, kModule, "cut " + std::to_string(a) + " has the wrong dimension");
        for (const auto& v : base_.vertices())
            if (cuts_[a](v) < 0)
                fail(ErrorKind::Precondition, kModule,
                     "cut " + std::to_string(a) + " is negative at a vertex of P, so P(0) != P");
    }
}

Rational MovingFamily::min_cut(const RVec& x) const {
    Rational m = cuts_[0](x);
    for (std::size_t a = 1; a < cuts_.size(); ++a) m = std::min(m, cuts_[a](x));
    return m;
}

double MovingFamily::min_cut(std::span<const double> x) const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& c : cuts_) m = std::min(m, c(x));
    return m;
}

Slice slice(const MovingFamily& family, const Rational& t) {
    const auto& base = family.base();
    std::vector<AffineFunctional> ineqs = base.inequalities();
    const int d = static_cast<int>(ineqs.size());
    for (const auto& c : family.cuts()) ineqs.push_back(c.shifted(t));

    Slice s;
    s.t = t;
    s.polytope = Polytope::make_if_full(family.dim(), std::move(ineqs));
    if (!s.polytope) return s;
    const auto& facets = s.polytope->facets();
    for (int f = 0; f < static_cast<int>(facets.size()); ++f) {
        int rep = facets[f].active_facets[0];
        if (rep >= d) {
            s.new_facets.push_back(f);
            s.new_cuts.push_back(rep - d);
        } else {
            s.old_facets.push_back(f);
        }
    }
    return s;
}

AffineFunctional TestConfigPolytope::roof_functional(int cut) const {
    const auto& phi = family.cuts().at(cut);
    RVec nu = phi.normal;
    nu.emplace_back(-1);
    return {std::move(nu), phi.offset};
}

AffineFunctional TestConfigPolytope::side_functional(int base_ineq) const {
    const auto& l = family.base().inequalities().at(base_ineq);
    RVec nu = l.normal;
    nu.emplace_back(0);
    return {std::move(nu), l.offset};
}

namespace {

std::vector<AffineFunctional> gamma_inequalities(const MovingFamily& family) {
    const int n = family.dim();
    std::vector<AffineFunctional> ineqs;
    for (const auto& l : family.base().inequalities()) {
        RVec nu = l.normal;
        nu.emplace_back(0);
        ineqs.emplace_back(std::move(nu), l.offset);
    }
    RVec up(n + 1, Rational(0));
    up[n] = 1;
    ineqs.emplace_back(std::move(up), Rational(0));
    for (const auto& c : family.cuts()) {
        RVec nu = c.normal;
        nu.emplace_back(-1);
        ineqs.emplace_back(std::move(nu), c.offset);
    }
    return ineqs;
}

}  // namespace

TestConfigPolytope build_test_config(const MovingFamily& family) {
    const int n = family.dim();
    std::optional<Polytope> gamma;
    try {
        gamma.emplace(n + 1, gamma_inequalities(family));
    } catch (const Error& e) {
        fail(ErrorKind::Geometry, kModule, std::string("test configuration polytope: ") + e.what());
    }

    TestConfigPolytope cfg{family, std::move(*gamma), {}, {}, {}, {}, -1, {}};
    const int d = static_cast<int>(family.base().inequalities().size());
    const auto& facets = cfg.gamma.facets();
    std::vector<int> cut_of_facet(facets.size(), -1);
    for (int f = 0; f < static_cast<int>(facets.size()); ++f) {
        int rep = facets[f].active_facets[0];
        if (rep < d) {
            cfg.side_facets.push_back(f);
            cfg.side_base.push_back(rep);
        } else if (rep == d) {
            cfg.base_facet = f;
        } else {
            cfg.roof_facets.push_back(f);
            cfg.roof_cuts.push_back(rep - d - 1);
        }
    }

    const auto& ridges = cfg.gamma.faces(2);
    for (int r = 0; r < static_cast<int>(ridges.size()); ++r) {
        std::vector<int> cuts;
        for (int rep : ridges[r].active_facets)
            if (rep > d) cuts.push_back(rep - d - 1);
        if (cuts.size() != 2 || ridges[r].active_facets.size() != 2) continue;
        RoofRidge ridge;
        ridge.face_index = r;
        ridge.cut_a = cuts[0];
        ridge.cut_b = cuts[1];
        const auto& first = cfg.gamma.vertices()[ridges[r].vertices[0]][n];
        ridge.horizontal = std::all_of(ridges[r].vertices.begin(), ridges[r].vertices.end(),
                                       [&](int v) { return cfg.gamma.vertices()[v][n] == first; });
        cfg.ridges.push_back(ridge);
    }
    return cfg;
}

std::vector<Rational> critical_values(const TestConfigPolytope& config) {
    const int n = config.family.dim();
    std::vector<Rational> ts;
    for (const auto& v : config.gamma.vertices()) ts.push_back(v[n]);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    return ts;
}

std::vector<Rational> critical_values(const MovingFamily& family) {
    return critical_values(build_test_config(family));
}

bool is_critical(const std::vector<Rational>& critical, const Rational& t) {
    return std::binary_search(critical.begin(), critical.end(), t);
}

Rational seshadri_constant(const Polytope& p, const AffineFunctional& phi) {
    std::optional<Rational> best;
    for (const auto& v : p.vertices()) {
        Rational value = phi(v);
        if (value < 0) fail(ErrorKind::Precondition, kModule, "Seshadri function is negative at a vertex of P");
        if (value > 0 && (!best || value < *best)) best = value;
    }
    if (!best) fail(ErrorKind::Precondition, kModule, "Seshadri function vanishes on all of P");
    return *best;
}

}  // namespace toric
