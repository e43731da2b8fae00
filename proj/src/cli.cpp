#include "toric/cli.hpp"

#include "toric/error.hpp"
#include "toric/stability.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <memory>
#include <numeric>
#include <ostream>
#include <sstream>

namespace toric {

namespace {

constexpr const char* kModule = "cli";

struct Context {
    const Scenario& scenario;
    const RunOptions& run;
    int dim() const { return scenario.model.polytope.dim(); }
    const Json& params() const { return scenario.params; }

    DensityOptions density() const {
        DensityOptions d;
        d.threads = run.threads;
        if (run.tolerance) d.quadrature.tolerance = *run.tolerance;
        return d;
    }
    AsymptoticsOptions asymptotics() const {
        AsymptoticsOptions a;
        a.threads = run.threads;
        a.quadrature.tolerance = run.tolerance.value_or(1e-10);
        a.convention = run.convention;
        return a;
    }
    std::shared_ptr<const SymplecticPotential> potential() const {
        return std::make_shared<const SymplecticPotential>(scenario.model.polytope, scenario.model.perturbation);
    }
};

Json header(const Context& ctx, const std::string& task) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["task"] = task;
    j["model"] = ctx.scenario.model.name;
    j["normalization"] = kNormalizationNote;
    return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string fmt(double x) { return format_double(x); }

Json rpoly_json(const RPoly& p) {
    Json a = Json::array();
    for (const auto& c : p) a.push_back(to_string(c));
    return a;
}

std::string point_label(std::span<const double> y) {
    std::string s = "(";
    for (std::size_t i = 0; i < y.size(); ++i) s += (i ? "," : "") + fmt(y[i]);
    return s + ")";
}

std::vector<std::string> coordinate_columns(int dim, const std::string& prefix = "y") {
    std::vector<std::string> c;
    for (int i = 1; i <= dim; ++i) c.push_back(prefix + std::to_string(i));
    return c;
}

/// Interior points of a g^n grid over the bounding box of P.
std::vector<std::vector<double>> interior_grid(const Polytope& p, int g) {
    const int n = p.dim();
    std::vector<double> lo(n), hi(n);
    for (int j = 0; j < n; ++j) {
        lo[j] = hi[j] = to_double(p.vertices()[0][j]);
        for (const auto& v : p.vertices()) {
            lo[j] = std::min(lo[j], to_double(v[j]));
            hi[j] = std::max(hi[j], to_double(v[j]));
        }
    }
    std::vector<std::vector<double>> out;
    std::vector<int> idx(n, 0);
    while (true) {
        std::vector<double> x(n);
        for (int j = 0; j < n; ++j) x[j] = lo[j] + (hi[j] - lo[j]) * (idx[j] + 1.0) / (g + 1.0);
        bool inside = true;
        for (const auto& f : p.inequalities())
            if (!(f(std::span<const double>(x)) > 1e-12)) inside = false;
        if (inside) out.push_back(x);
        int j = n - 1;
        while (j >= 0 && idx[j] == g - 1) idx[j--] = 0;
        if (j < 0) break;
        ++idx[j];
    }
    return out;
}

/// Regular t-values strictly inside the first regularity interval, at fractions of its length.
std::vector<Rational> sample_regular(const std::vector<Rational>& critical, std::initializer_list<int> quarters) {
    const Rational top = critical.size() > 1 ? critical[1] : Rational(1);
    std::vector<Rational> out;
    for (int q : quarters) out.push_back(top * q / 4);
    return out;
}

std::vector<std::int64_t> scaled(const std::vector<std::int64_t>& base, const Integer& n) {
    std::vector<std::int64_t> out;
    for (auto k : base) out.push_back(k * n.convert_to<std::int64_t>());
    return out;
}

// ---------------------------------------------------------------------------------------------

Artifacts task_check_delzant(const Context& ctx) {
    Artifacts a;
    const auto v = check_delzant(ctx.scenario.model.polytope);
    Json j = header(ctx, "check-delzant");
    j["delzant"] = v.delzant;
    j["integral"] = v.integral;
    j["failure"] = v.failure;
    j["vertices"] = Json::array();
    for (const auto& c : v.vertices) {
        Json e = Json::array();
        for (const auto& d : c.edge_directions) {
            Json dj = Json::array();
            for (const auto& x : d) dj.push_back(x.str());
            e.push_back(dj);
        }
        j["vertices"].push_back({{"vertex", rational_vector_json(c.vertex)},
                                 {"active_facets", c.active_facets},
                                 {"edge_directions", e},
                                 {"determinant", c.determinant.str()},
                                 {"ok", c.ok},
                                 {"reason", c.reason}});
    }
    a.add("delzant.json", dump(j));
    a.summary.push_back(std::string("Delzant: ") + (v.delzant ? "yes" : "no") + ", integral: " + (v.integral ? "yes" : "no"));
    if (!v.delzant) {
        a.summary.push_back("failure: " + v.failure);
        a.exit_code = kExitGeometry;
    }
    return a;
}

Artifacts task_lattice_count(const Context& ctx) {
    Artifacts a;
    const Polytope* p = &ctx.scenario.model.polytope;
    std::optional<Slice> sl;
    Rational t = has_param(ctx.params(), "t") ? param_rational(ctx.params(), "t") : Rational(0);
    if (t != 0) {
        sl = slice(ctx.scenario.model.family(), t);
        if (sl->empty()) fail(ErrorKind::Precondition, "polytope_core", "P(t) is empty at t = " + to_string(t));
        p = &*sl->polytope;
    }
    std::vector<std::int64_t> ks;
    if (has_param(ctx.params(), "ks")) ks = param_ints(ctx.params(), "ks");
    else for (std::int64_t k = 1; k <= 8; ++k) ks.push_back(k);
    for (auto k : ks)
        if (k < 1) fail(ErrorKind::Precondition, "polytope_core", "k must be positive");

    const auto poly = count_polynomial(*p);
    CsvTable csv({"k", "count", "polynomial_value", "on_progression"});
    csv.comment("N(kP(t)) at t = " + to_string(t));
    std::string coeffs;
    for (std::size_t i = 0; i < poly.coeffs.size(); ++i) coeffs += (i ? " " : "") + to_string(poly.coeffs[i]);
    csv.comment("count polynomial on k = " + poly.divisor.str() + "j, lowest degree first: " + coeffs);
    for (auto k : ks) {
        const auto n = count_lattice_points(*p, k);
        const bool on = k % poly.divisor.convert_to<std::int64_t>() == 0;
        const Rational pv = evaluate(poly.coeffs, Rational(k));
        if (on) a.check(pv == Rational(n), "count at k = " + std::to_string(k) + " differs from the count polynomial");
        csv.add_row({std::to_string(k), std::to_string(n), to_string(pv), on ? "1" : "0"});
    }
    a.add("lattice_count.csv", csv.str());
    a.summary.push_back("counted " + std::to_string(ks.size()) + " levels; divisor N = " + poly.divisor.str());
    return a;
}

std::vector<std::size_t> all_indices(const SectionBasis& b) {
    std::vector<std::size_t> v(b.size());
    std::iota(v.begin(), v.end(), std::size_t{0});
    return v;
}

Artifacts task_density_profile(const Context& ctx) {
    Artifacts a;
    const int n = ctx.dim();
    const auto& prm = ctx.params();
    const std::int64_t k = has_param(prm, "k") ? param_int(prm, "k") : (n == 1 ? 30 : 8);
    const Rational t = has_param(prm, "t") ? param_rational(prm, "t") : Rational(0);
    if (k < 1) fail(ErrorKind::Precondition, "density", "k must be positive");
    std::optional<MovingFamily> fam;
    if (ctx.scenario.model.has_family()) fam = ctx.scenario.model.family();
    if (t != 0 && !fam) fail(ErrorKind::Precondition, "density", "t != 0 needs a model with cuts");
    auto points = has_param(prm, "points") ? param_points(prm, "points", n)
                                           : interior_grid(ctx.scenario.model.polytope,
                                                           has_param(prm, "grid") ? static_cast<int>(param_int(prm, "grid"))
                                                                                  : (n == 1 ? 39 : 9));
    auto u = ctx.potential();
    for (const auto& y : points) u->require_interior(y);

    SectionBasis basis(u, k, ctx.density());
    const auto all = all_indices(basis);
    const auto part = fam ? partial_indices(basis, *fam, t) : all;

    auto cols = coordinate_columns(n);
    for (const char* c : {"rho_k", "rho_hat_tk", "region"}) cols.push_back(c);
    CsvTable csv(cols);
    csv.comment(kNormalizationNote);
    csv.comment("k = " + std::to_string(k) + ", t = " + to_string(t));
    for (const auto& y : points) {
        const double rho = partial_density(basis, all, y);
        const double rho_hat = partial_density(basis, part, y);
        const Region r = fam ? region_classify(*fam, t, std::span<const double>(y)) : Region::Allowed;
        a.check(rho_hat <= rho * (1.0 + 1e-12), "rho_hat exceeds rho at " + point_label(y));
        std::vector<std::string> row;
        for (double c : y) row.push_back(fmt(c));
        row.push_back(fmt(rho));
        row.push_back(fmt(rho_hat));
        row.push_back(region_label(r));
        csv.add_row(row);
    }
    const double mass = integrate_partial_density(basis, part);
    const double count = static_cast<double>(part.size());
    csv.comment("mass <rho_hat_tk, 1> = " + fmt(mass) + ", lattice count N(kP(t)) = " + std::to_string(part.size()));
    a.check(std::abs(mass - count) <= 1e-6 * count, "mass conservation: <rho_hat, 1> = " + fmt(mass) + " but N = " + fmt(count));
    a.add("density_profile.csv", csv.str());
    a.summary.push_back("density profile at k = " + std::to_string(k) + ", t = " + to_string(t) + ": " +
                        std::to_string(points.size()) + " points, mass " + fmt(mass) + " vs count " + fmt(count));

    if (has_param(prm, "decay_points")) {
        if (!fam) fail(ErrorKind::Precondition, "density", "decay checks need a model with cuts");
        const auto dpts = param_points(prm, "decay_points", n);
        const auto ks = has_param(prm, "decay_ks") ? param_ints(prm, "decay_ks") : std::vector<std::int64_t>{10, 20, 30, 40, 50, 60};
        const auto rep = decay_report(*fam, u, t, dpts, ks, ctx.density());
        auto dc = coordinate_columns(n);
        for (const char* c : {"region", "k", "rho_k", "rho_hat_tk", "relative_gap", "slope_per_k", "slope_per_doubling"})
            dc.push_back(c);
        CsvTable dcsv(dc);
        dcsv.comment(kNormalizationNote);
        dcsv.comment("t = " + to_string(t));
        for (const auto& p : rep) {
            a.check(p.ok, std::string(p.region == Region::Forbidden ? "forbidden-region decay" : "allowed-region convergence") +
                              " fails at " + point_label(p.y));
            for (std::size_t i = 0; i < p.ks.size(); ++i) {
                std::vector<std::string> row;
                for (double c : p.y) row.push_back(fmt(c));
                row.push_back(region_label(p.region));
                row.push_back(std::to_string(p.ks[i]));
                row.push_back(fmt(p.rho[i]));
                row.push_back(fmt(p.rho_hat[i]));
                row.push_back(fmt(std::abs(p.rho_hat[i] - p.rho[i]) / p.rho[i]));
                row.push_back(p.region == Region::Forbidden ? fmt(p.slope_per_k) : "");
                row.push_back(p.region == Region::Forbidden ? fmt(p.slope_per_doubling) : "");
                dcsv.add_row(row);
            }
            if (p.region == Region::Forbidden)
                a.summary.push_back("decay at " + point_label(p.y) + ": slope per doubling " + fmt(p.slope_per_doubling));
            else
                a.summary.push_back("relative gap at " + point_label(p.y) + ", k = " + std::to_string(p.ks.back()) + ": " +
                                    fmt(p.relative_gap.back()));
        }
        a.add("decay.csv", dcsv.str());
    }
    return a;
}

Artifacts task_em_check(const Context& ctx) {
    Artifacts a;
    const auto& p = ctx.scenario.model.polytope;
    const auto& prm = ctx.params();
    const Integer N = p.vertex_denominator();
    const auto ks = has_param(prm, "ks") ? param_ints(prm, "ks") : scaled({4, 8, 16, 32, 64}, N);
    CsvTable csv({"k", "lattice_sum", "approx", "residual"});
    csv.comment("approx = k^n int_P f + (k^(n-1)/2) int_dP f dsigma (lattice Leray measure)");
    if (!has_param(prm, "f")) {
        csv.comment("f = 1, exact arithmetic");
        std::optional<Rational> first;
        for (auto k : ks) {
            const auto r = euler_maclaurin(p, k);
            if (!first) first = r.residual;
            a.check(r.residual == *first, "f = 1 residual is not constant in k (k = " + std::to_string(k) + ")");
            csv.add_row({std::to_string(k), r.lattice_sum.str(), to_string(r.approx), to_string(r.residual)});
        }
        a.summary.push_back("Euler-Maclaurin f = 1: residual " + (first ? to_string(*first) : std::string("-")) +
                            " for all " + std::to_string(ks.size()) + " levels");
    } else {
        const auto f = parse_test_function(prm.at("f"), p.dim());
        csv.comment("f = " + f.name());
        QuadratureOptions q;
        q.tolerance = ctx.run.tolerance.value_or(1e-10);
        for (auto k : ks) {
            const auto r = euler_maclaurin(p, [&f](std::span<const double> x) { return f(x); }, k, q);
            csv.add_row({std::to_string(k), fmt(r.lattice_sum), fmt(r.approx), fmt(r.residual)});
        }
        a.summary.push_back("Euler-Maclaurin with f = " + f.name() + " over " + std::to_string(ks.size()) + " levels");
    }
    a.add("em_check.csv", csv.str());
    return a;
}

Artifacts task_expansion_check(const Context& ctx) {
    Artifacts a;
    const int n = ctx.dim();
    const auto& prm = ctx.params();
    const auto f = has_param(prm, "f") ? parse_test_function(prm.at("f"), n) : TestFunction::constant(n, 1.0);
    const auto ks = has_param(prm, "ks") ? param_ints(prm, "ks")
                                         : (n == 1 ? std::vector<std::int64_t>{10, 20, 40, 80} : std::vector<std::int64_t>{8, 16, 32});
    std::optional<double> max_slope;
    if (has_param(prm, "max_slope")) max_slope = param_double(prm, "max_slope");
    auto u = ctx.potential();
    CsvTable csv({"k", "direct", "asymptotic", "residual", "fitted_slope"});
    csv.comment(kNormalizationNote);
    csv.comment("f = " + f.name());
    double slope = 0.0;
    bool floor = false;
    if (has_param(prm, "alpha")) {
        const auto alpha = param_points(Json{{"alpha", Json::array({prm.at("alpha")})}}, "alpha", n).front();
        ExpansionCheckOptions eo;
        eo.density = ctx.density();
        const auto r = section_expansion_check(*u, alpha, ks, f, eo);
        csv.comment("section expansion at alpha = " + point_label(alpha) +
                    ": f(alpha) + (1/2k)(s f + 1/2 d_i d_j(G^ij f))(alpha)");
        slope = r.slope;
        floor = r.at_noise_floor;
        for (const auto& row : r.rows)
            csv.add_row({std::to_string(row.k), fmt(row.direct), fmt(row.predicted), fmt(row.residual),
                         floor ? "noise-floor" : fmt(slope)});
    } else {
        const Rational t = has_param(prm, "t") ? param_rational(prm, "t") : Rational(0);
        const auto fam = ctx.scenario.model.family();
        const auto r = expansion_residual(fam, u, t, [&f](std::span<const double> x) { return f(x); }, ks, ctx.asymptotics());
        csv.comment("partial density expansion at t = " + to_string(t) + ", dp convention " + to_string(ctx.run.convention));
        slope = r.slope;
        floor = r.at_noise_floor;
        for (const auto& row : r.rows)
            csv.add_row({std::to_string(row.k), fmt(row.direct), fmt(row.asymptotic), fmt(row.residual),
                         floor ? "noise-floor" : fmt(slope)});
    }
    if (floor) csv.comment("residuals are at the quadrature noise floor; no slope is fitted");
    a.add("expansion.csv", csv.str());
    a.summary.push_back(floor ? std::string("expansion residual at the noise floor") : "expansion residual slope " + fmt(slope));
    if (max_slope && !floor) a.check(slope <= *max_slope, "residual slope " + fmt(slope) + " exceeds " + fmt(*max_slope));
    return a;
}

Json hilbert_json(const HilbertFunctions& h) {
    Json pieces = Json::array();
    for (std::size_t i = 0; i < h.A0.size(); ++i)
        pieces.push_back({{"interval", {to_string(h.breaks[i]), to_string(h.breaks[i + 1])}},
                          {"A0", rpoly_json(h.A0[i])},
                          {"A1", rpoly_json(h.A1[i])}});
    return pieces;
}

Artifacts task_slope(const Context& ctx) {
    Artifacts a;
    const auto fam = ctx.scenario.model.family();
    auto u = ctx.potential();
    const auto opt = ctx.asymptotics();
    const auto h = hilbert_functions(fam);
    const Rational top = h.breaks.back();
    const auto cs = has_param(ctx.params(), "c") ? param_rationals(ctx.params(), "c")
                                                 : std::vector<Rational>{top / 4, top / 2, top * 3 / 4};
    const auto critical = critical_values(fam);
    const Rational mu = slope_mu(fam.base());
    const double avs = average_scalar_curvature(*u, opt.quadrature, opt.threads);
    a.check(std::abs(to_double(mu) - 0.5 * avs) <= 1e-6, "mu(X) differs from Av(s)/2");

    Json j = header(ctx, "slope");
    j["critical_values"] = rational_vector_json(critical);
    j["mu_X"] = to_string(mu);
    j["half_average_s"] = 0.5 * avs;
    j["hilbert"] = hilbert_json(h);
    j["slopes"] = Json::array();
    for (const auto& c : cs) {
        if (!(c > 0) || c > top) fail(ErrorKind::Precondition, "stability", "c = " + to_string(c) + " is outside (0, c_max]");
        const Rational mu_c = slope_mu_c(h, c);
        const Rational excess = mu_c - mu;
        Json e{{"c", to_string(c)}, {"mu_c", to_string(mu_c)}, {"excess", to_string(excess)}, {"excess_value", to_double(excess)}};
        e["verdict"] = excess < 0 ? "stable" : (excess == 0 ? "semistable" : "violated");
        if (fam.cuts().size() == 1 && !is_critical(critical, c)) {
            const auto m = slope_excess_metric(fam, *u, c, opt);
            e["metric"] = {{"volume_integral", m.volume_integral},
                           {"curvature_integral", m.curvature_integral},
                           {"surface_term", m.surface_term},
                           {"excess", m.excess}};
            a.check(std::abs(m.excess - to_double(excess)) <= 1e-4,
                    "metric slope excess " + fmt(m.excess) + " differs from " + to_string(excess) + " at c = " + to_string(c));
        } else {
            e["metric"] = nullptr;
        }
        a.summary.push_back("c = " + to_string(c) + ": mu_c = " + to_string(mu_c) + ", mu_c - mu(X) = " + to_string(excess) +
                            " (" + e["verdict"].get<std::string>() + ")");
        j["slopes"].push_back(e);
    }
    a.add("slope.json", dump(j));
    return a;
}

Json futaki_json(const FutakiReport& r, const FutakiCombinatorial& fc) {
    return Json{{"name", r.name},
                {"is_product", r.is_product},
                {"F0", to_string(fc.F0)},
                {"F1_combinatorial", to_string(r.F1_combinatorial)},
                {"F1_metric", r.F1_metric},
                {"w_k", rpoly_json(fc.w)},
                {"d_k", rpoly_json(fc.d)},
                {"sample_k", fc.ks},
                {"volume_P", to_string(r.volume_p)},
                {"volume_Gamma", to_string(r.delta.volume_gamma)},
                {"dp_tilde", r.delta.dp_tilde},
                {"dp_tilde_sliced", r.delta.dp_tilde_sliced},
                {"Delta", r.delta.delta},
                {"average_s_Gamma", r.average_gamma},
                {"average_s_P", r.average_p},
                {"side_volume", to_string(r.side_volume)},
                {"gamma_scalar_integral", r.gamma_scalar},
                {"roof_residual", r.roof_residual},
                {"verdict", r.verdict}};
}

Artifacts task_futaki(const Context& ctx) {
    Artifacts a;
    const auto fam = ctx.scenario.model.family();
    auto u = ctx.potential();
    const auto opt = ctx.asymptotics();
    const auto config = build_test_config(fam);
    const auto fc = futaki_combinatorial(config);
    const auto r = futaki_report(config, *u, opt, ctx.scenario.model.name);
    Json j = header(ctx, "futaki");
    j["dp_convention"] = to_string(ctx.run.convention);
    j["critical_values"] = rational_vector_json(critical_values(config));
    j["report"] = futaki_json(r, fc);
    a.add("futaki.json", dump(j));
    a.check(std::abs(to_double(r.F1_combinatorial) - r.F1_metric) <= 1e-4,
            "F1 pipelines disagree: " + to_string(r.F1_combinatorial) + " vs " + fmt(r.F1_metric));
    a.check(r.delta.delta >= 0.0, "Delta(Gamma) is negative");
    a.check(r.is_product == (r.delta.dp_tilde == 0.0), "product flag and Delta(Gamma) = 0 disagree");
    a.check(std::abs(r.roof_residual) <= 1e-6, "roof identity residual " + fmt(r.roof_residual));
    a.summary.push_back("F1 = " + to_string(r.F1_combinatorial) + " (combinatorial), " + fmt(r.F1_metric) +
                        " (metric); Delta = " + fmt(r.delta.delta) + "; verdict " + r.verdict);
    return a;
}

Artifacts task_curvature(const Context& ctx) {
    Artifacts a;
    auto u = ctx.potential();
    const auto opt = ctx.asymptotics();
    const auto grid = interior_grid(ctx.scenario.model.polytope, 10);
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& x : grid) {
        const double s = u->scalar_curvature(x);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    const double avs = average_scalar_curvature(*u, opt.quadrature, opt.threads);
    const Rational mu = slope_mu(ctx.scenario.model.polytope);
    Json j = header(ctx, "curvature");
    j["grid_points"] = grid.size();
    j["s_min"] = lo;
    j["s_max"] = hi;
    j["average_s"] = avs;
    j["mu_X"] = to_string(mu);
    j["lattice_boundary_volume"] = to_string(ctx.scenario.model.polytope.lattice_boundary_volume());
    j["volume"] = to_string(ctx.scenario.model.polytope.volume());
    a.check(std::abs(to_double(mu) - 0.5 * avs) <= 1e-6, "mu(X) differs from Av(s)/2");
    a.add("curvature.json", dump(j));
    a.summary.push_back("scalar curvature in [" + fmt(lo) + ", " + fmt(hi) + "], Av(s)/2 = " + fmt(0.5 * avs) +
                        ", mu(X) = " + to_string(mu));
    return a;
}

Artifacts task_family(const Context& ctx) {
    Artifacts a;
    const auto fam = ctx.scenario.model.family();
    auto u = ctx.potential();
    const auto opt = ctx.asymptotics();
    const auto critical = critical_values(fam);
    const auto h = hilbert_functions(fam);
    Json j = header(ctx, "family");
    j["dp_convention"] = to_string(ctx.run.convention);
    j["critical_values"] = rational_vector_json(critical);
    if (fam.cuts().size() == 1) {
        try {
            j["seshadri_constant"] = to_string(seshadri_constant(fam.base(), fam.cuts()[0]));
        } catch (const Error&) {
            j["seshadri_constant"] = nullptr;
        }
    }
    j["hilbert"] = hilbert_json(h);

    CsvTable csv({"t", "A1_combinatorial", "A1_geometric", "facet_term", "derivative_term", "corner_term",
                  "old_boundary_volume", "boundary_identity_residual"});
    csv.comment(kNormalizationNote);
    csv.comment("dp convention " + std::string(to_string(ctx.run.convention)));
    for (const auto& t : sample_regular(critical, {1, 2, 3})) {
        const auto hc = hilbert_coeffs_combinatorial(fam, t);
        const auto hg = hilbert_coeffs_geometric(fam, *u, t, opt);
        const auto ah = a_hat_pair(fam, *u, t, [](std::span<const double>) { return 1.0; }, opt);
        const auto bv = boundary_volume_identity(fam, *u, t, opt);
        csv.add_row({to_string(t), to_string(hc.A1), fmt(hg.A1), fmt(ah.facet_term), fmt(ah.derivative_term),
                     fmt(ah.corner_term), to_string(bv.old_boundary_volume), fmt(bv.residual)});
        if (ctx.run.convention == DpConvention::Corrected) {
            a.check(std::abs(hg.A1 - to_double(hc.A1)) <= 1e-5 * std::max(1.0, std::abs(to_double(hc.A1))),
                    "k^(n-1) coefficient mismatch at t = " + to_string(t));
            a.check(std::abs(bv.residual) <= 1e-6, "boundary volume identity residual " + fmt(bv.residual) + " at t = " + to_string(t));
        }
        a.summary.push_back("t = " + to_string(t) + ": A1 = " + to_string(hc.A1) + " exact, " + fmt(hg.A1) +
                            " geometric; boundary identity residual " + fmt(bv.residual));
    }
    a.add("family.json", dump(j));
    a.add("boundary_terms.csv", csv.str());
    return a;
}

void merge(Artifacts& into, Artifacts from, const std::string& section) {
    for (auto& f : from.files) into.files.push_back(std::move(f));
    for (auto& s : from.summary) into.summary.push_back(section + ": " + s);
    for (auto& s : from.failures) into.failures.push_back(section + ": " + s);
    if (into.exit_code == kExitOk) into.exit_code = from.exit_code;
}

/// Default density and expansion parameters for the report: a regular t of the form m/k.
Json report_density_params(const Context& ctx) {
    Json p = ctx.params().contains("density") ? ctx.params().at("density") : Json::object();
    const int n = ctx.dim();
    if (!p.contains("k")) p["k"] = n == 1 ? 20 : 8;
    if (!p.contains("grid")) p["grid"] = n == 1 ? 19 : 7;
    if (!p.contains("t") && ctx.scenario.model.has_family()) {
        const auto crit = critical_values(ctx.scenario.model.family());
        const std::int64_t k = p.at("k").get<std::int64_t>();
        const Rational top = crit.size() > 1 ? crit[1] : Rational(1);
        Rational t(static_cast<long>((top * k / 2).convert_to<double>() + 0.5), k);
        if (t <= 0 || t >= top) t = top / 2;
        p["t"] = to_string(t);
    }
    return p;
}

Artifacts task_report(const Context& ctx) {
    Artifacts a;
    const auto& m = ctx.scenario.model;
    a.add("model.json", dump(model_to_json(m)));
    auto delzant = task_check_delzant(ctx);
    const bool smooth = delzant.exit_code == kExitOk;
    merge(a, std::move(delzant), "check-delzant");
    if (!smooth) return a;

    auto sub = [&](const Json& params, auto fn, const std::string& name) {
        Scenario s = ctx.scenario;
        s.params = params;
        Context c{s, ctx.run};
        merge(a, fn(c), name);
    };
    const Json& prm = ctx.params();
    auto section = [&](const char* key) { return prm.contains(key) ? prm.at(key) : Json::object(); };

    sub(section("lattice-count"), task_lattice_count, "lattice-count");
    if (check_delzant(m.polytope).integral) sub(section("em-check"), task_em_check, "em-check");
    sub(Json::object(), task_curvature, "curvature");
    const Json dens = report_density_params(ctx);
    sub(dens, task_density_profile, "density-profile");
    if (m.has_family()) {
        sub(Json::object(), task_family, "family");
        Json ex = section("expansion-check");
        if (!ex.contains("t")) ex["t"] = dens.at("t");
        if (!ex.contains("ks")) {
            const std::int64_t k = dens.at("k").get<std::int64_t>();
            ex["ks"] = m.polytope.dim() == 1 ? std::vector<std::int64_t>{k, 2 * k, 4 * k} : std::vector<std::int64_t>{k, 2 * k};
        }
        sub(ex, task_expansion_check, "expansion-check");
        sub(section("slope"), task_slope, "slope");
        sub(Json::object(), task_futaki, "futaki");
    }
    return a;
}

}  // namespace

const std::vector<std::string>& cli_tasks() {
    static const std::vector<std::string> tasks{"check-delzant", "lattice-count", "density-profile", "em-check",
                                                "expansion-check", "slope", "futaki", "report"};
    return tasks;
}

Artifacts run_task(const std::string& task, const Scenario& scenario, const RunOptions& options) {
    Context ctx{scenario, options};
    if (task == "check-delzant") return task_check_delzant(ctx);
    if (task == "lattice-count") return task_lattice_count(ctx);
    if (task == "density-profile") return task_density_profile(ctx);
    if (task == "em-check") return task_em_check(ctx);
    if (task == "expansion-check") return task_expansion_check(ctx);
    if (task == "slope") return task_slope(ctx);
    if (task == "futaki") return task_futaki(ctx);
    if (task == "report") return task_report(ctx);
    fail(ErrorKind::Parse, kModule, "unknown task '" + task + "'");
}

int run(const RunOptions& options, std::ostream& out, std::ostream& err) {
    try {
        if (options.threads < 1) fail(ErrorKind::Precondition, kModule, "--threads must be at least 1");
        if (options.tolerance && !(*options.tolerance > 0.0)) fail(ErrorKind::Precondition, kModule, "--tolerance must be positive");
        const Scenario scenario = load_scenario(options.scenario);
        if (!scenario.task.empty() && options.task != "report" && scenario.task != options.task)
            fail(ErrorKind::Parse, kModule,
                 "scenario " + options.scenario.string() + " is for task '" + scenario.task + "', not '" + options.task + "'");
        Artifacts a = run_task(options.task, scenario, options);

        if (options.out) {
            for (const auto& [name, text] : a.files) write_text(*options.out / name, text);
            out << "# " << options.task << " on " << scenario.name << "\n";
            for (const auto& s : a.summary) out << "  " << s << "\n";
            for (const auto& [name, text] : a.files) out << "  wrote " << (*options.out / name).string() << "\n";
        } else {
            for (const auto& [name, text] : a.files) {
                if (a.files.size() > 1) out << "==> " << name << " <==\n";
                out << text;
            }
        }
        for (const auto& f : a.failures) err << "ASSERTION FAILED [" << options.task << "]: " << f << "\n";
        if (!a.failures.empty()) return kExitAssertion;
        if (a.exit_code != kExitOk) {
            err << "error [polytope_core]: " << (a.summary.size() > 1 ? a.summary[1] : a.summary.front()) << "\n";
            return a.exit_code;
        }
        return kExitOk;
    } catch (const Error& e) {
        err << "error [" << e.module() << "]: " << e.what() << "\n";
        return static_cast<int>(e.kind());
    } catch (const std::exception& e) {
        err << "error [" << kModule << "]: " << e.what() << "\n";
        return kExitAssertion;
    }
}

}  // namespace toric
