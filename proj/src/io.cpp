#include "toric/io.hpp"

#include "toric/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace toric {

namespace {

constexpr const char* kModule = "cli";

[[noreturn]] void parse_fail(const std::string& where, const std::string& what) {
    fail(ErrorKind::Parse, kModule, where + ": " + what);
}

Rational json_rational(const Json& j, const std::string& where) {
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const Error& e) {
            parse_fail(where, e.what());
        }
    }
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number_float()) return from_decimal(j.get<double>());
    parse_fail(where, "expected a rational (\"p/q\" string or number)");
}

AffineFunctional json_functional(const Json& j, int dim, bool integral_normal, const std::string& where) {
    if (!j.is_object() || !j.contains("normal") || !j.contains("offset"))
        parse_fail(where, "expected {\"normal\": [...], \"offset\": \"p/q\"}");
    const Json& nj = j.at("normal");
    if (!nj.is_array() || static_cast<int>(nj.size()) != dim)
        parse_fail(where, "normal must have " + std::to_string(dim) + " entries");
    RVec nu;
    for (std::size_t i = 0; i < nj.size(); ++i) {
        const std::string w = where + ".normal[" + std::to_string(i) + "]";
        if (integral_normal && !nj[i].is_number_integer()) parse_fail(w, "facet normals must be integers");
        nu.push_back(json_rational(nj[i], w));
    }
    return {std::move(nu), json_rational(j.at("offset"), where + ".offset")};
}

const Json& require(const Json& params, const std::string& key) {
    if (!params.is_object() || !params.contains(key)) parse_fail("params." + key, "missing");
    return params.at(key);
}

}  // namespace

MovingFamily ModelFile::family() const {
    if (cuts.empty()) fail(ErrorKind::Precondition, kModule, name + ": the model has no cuts");
    return MovingFamily(polytope, cuts);
}

Polynomial parse_polynomial(const Json& j, int dim) {
    if (!j.is_object() || !j.contains("monomials") || !j.at("monomials").is_array())
        parse_fail("polynomial", "expected {\"monomials\": [...]}");
    std::vector<Monomial> terms;
    for (const auto& m : j.at("monomials")) {
        if (!m.contains("exponents") || !m.contains("coeff")) parse_fail("monomial", "needs exponents and coeff");
        Monomial t;
        for (const auto& e : m.at("exponents")) {
            if (!e.is_number_integer()) parse_fail("monomial", "exponents must be integers");
            t.exponents.push_back(e.get<int>());
        }
        if (!m.at("coeff").is_number()) parse_fail("monomial", "coeff must be a number");
        t.coeff = m.at("coeff").get<double>();
        if (static_cast<int>(t.exponents.size()) != dim) parse_fail("monomial", "exponent vector has the wrong length");
        terms.push_back(std::move(t));
    }
    return Polynomial(dim, std::move(terms));
}

ModelFile parse_model(const Json& j, const std::string& source) {
    if (!j.is_object()) parse_fail(source, "expected a JSON object");
    if (j.contains("schema") && j.at("schema") != kSchemaVersion)
        parse_fail(source, "unsupported schema version " + j.at("schema").dump());
    if (!j.contains("dim") || !j.at("dim").is_number_integer()) parse_fail(source, "missing integer field dim");
    const int dim = j.at("dim").get<int>();
    if (dim < 1 || dim > 4) parse_fail(source, "dim must be between 1 and 4");
    if (!j.contains("facets") || !j.at("facets").is_array()) parse_fail(source, "missing facets array");

    std::vector<AffineFunctional> facets;
    for (std::size_t i = 0; i < j.at("facets").size(); ++i) {
        const std::string w = source + ": facets[" + std::to_string(i) + "]";
        AffineFunctional f = json_functional(j.at("facets")[i], dim, true, w);
        if (f.primitive().normal != f.normal) parse_fail(w, "facet normal is not primitive");
        facets.push_back(std::move(f));
    }
    std::vector<AffineFunctional> cuts;
    if (j.contains("cuts")) {
        for (std::size_t i = 0; i < j.at("cuts").size(); ++i)
            cuts.push_back(json_functional(j.at("cuts")[i], dim, false, source + ": cuts[" + std::to_string(i) + "]"));
    }
    Polynomial w = Polynomial::zero(dim);
    if (j.contains("perturbation")) w = parse_polynomial(j.at("perturbation"), dim);
    std::string name = j.value("name", source);
    return ModelFile{std::move(name), Polytope(dim, std::move(facets)), std::move(cuts), std::move(w)};
}

Json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) parse_fail(path.string(), "cannot open file");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        parse_fail(path.string(), e.what());
    }
}

ModelFile load_model(const std::filesystem::path& path) { return parse_model(read_json(path), path.string()); }

Json rational_vector_json(const RVec& v) {
    Json a = Json::array();
    for (const auto& r : v) a.push_back(to_string(r));
    return a;
}

Json model_to_json(const ModelFile& m) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["name"] = m.name;
    j["dim"] = m.polytope.dim();
    auto functional = [](const AffineFunctional& f, bool integral) {
        Json n = Json::array();
        for (const auto& r : f.normal) {
            if (integral) n.push_back(r.convert_to<long long>());
            else n.push_back(to_string(r));
        }
        return Json{{"normal", n}, {"offset", to_string(f.offset)}};
    };
    j["facets"] = Json::array();
    for (const auto& f : m.polytope.inequalities()) j["facets"].push_back(functional(f, true));
    j["cuts"] = Json::array();
    for (const auto& f : m.cuts) j["cuts"].push_back(functional(f, false));
    Json mon = Json::array();
    for (const auto& t : m.perturbation.terms()) mon.push_back({{"exponents", t.exponents}, {"coeff", t.coeff}});
    j["perturbation"] = {{"monomials", mon}};
    return j;
}

Scenario load_scenario(const std::filesystem::path& path) {
    Json j = read_json(path);
    if (j.is_object() && j.contains("dim")) {
        ModelFile m = parse_model(j, path.string());
        std::string name = m.name;
        return Scenario{std::move(name), "", path, std::move(m), Json::object()};
    }
    if (!j.is_object() || !j.contains("model") || !j.at("model").is_string())
        parse_fail(path.string(), "a scenario needs a \"model\" path (or must itself be a model file)");
    if (j.contains("schema") && j.at("schema") != kSchemaVersion)
        parse_fail(path.string(), "unsupported schema version " + j.at("schema").dump());
    const std::filesystem::path model_path = path.parent_path() / j.at("model").get<std::string>();
    if (!std::filesystem::exists(model_path)) parse_fail(path.string(), "model file not found: " + model_path.string());
    ModelFile m = load_model(model_path);
    Json params = Json::object();
    if (j.contains("params")) {
        if (!j.at("params").is_object()) parse_fail(path.string(), "params must be an object");
        params = j.at("params");
    }
    std::string name = j.value("name", m.name);
    std::string task = j.value("task", std::string());
    return Scenario{std::move(name), std::move(task), model_path, std::move(m), std::move(params)};
}

bool has_param(const Json& params, const std::string& key) { return params.is_object() && params.contains(key); }

Rational param_rational(const Json& params, const std::string& key) {
    return json_rational(require(params, key), "params." + key);
}

std::vector<Rational> param_rationals(const Json& params, const std::string& key) {
    const Json& a = require(params, key);
    if (!a.is_array()) parse_fail("params." + key, "expected an array");
    std::vector<Rational> out;
    for (std::size_t i = 0; i < a.size(); ++i)
        out.push_back(json_rational(a[i], "params." + key + "[" + std::to_string(i) + "]"));
    return out;
}

double param_double(const Json& params, const std::string& key) {
    const Json& v = require(params, key);
    if (!v.is_number()) parse_fail("params." + key, "expected a number");
    return v.get<double>();
}

std::int64_t param_int(const Json& params, const std::string& key) {
    const Json& v = require(params, key);
    if (!v.is_number_integer()) parse_fail("params." + key, "expected an integer");
    return v.get<std::int64_t>();
}

std::vector<std::int64_t> param_ints(const Json& params, const std::string& key) {
    const Json& a = require(params, key);
    if (!a.is_array()) parse_fail("params." + key, "expected an array of integers");
    std::vector<std::int64_t> out;
    for (const auto& v : a) {
        if (!v.is_number_integer()) parse_fail("params." + key, "expected an array of integers");
        out.push_back(v.get<std::int64_t>());
    }
    return out;
}

std::vector<std::vector<double>> param_points(const Json& params, const std::string& key, int dim) {
    const Json& a = require(params, key);
    if (!a.is_array()) parse_fail("params." + key, "expected an array of points");
    std::vector<std::vector<double>> out;
    for (const auto& p : a) {
        if (!p.is_array() || static_cast<int>(p.size()) != dim)
            parse_fail("params." + key, "every point needs " + std::to_string(dim) + " coordinates");
        std::vector<double> x;
        for (const auto& c : p) {
            if (!c.is_number()) parse_fail("params." + key, "coordinates must be numbers");
            x.push_back(c.get<double>());
        }
        out.push_back(std::move(x));
    }
    return out;
}

std::string param_string(const Json& params, const std::string& key) {
    const Json& v = require(params, key);
    if (!v.is_string()) parse_fail("params." + key, "expected a string");
    return v.get<std::string>();
}

TestFunction parse_test_function(const Json& j, int dim) {
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
        parse_fail("test function", "expected an object with a \"kind\"");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") return TestFunction::constant(dim, param_double(j, "value"));
    if (kind == "polynomial") return TestFunction::polynomial(parse_polynomial(j, dim), j.value("name", "polynomial"));
    if (kind == "bump") {
        auto c = param_points(Json{{"center", Json::array({j.at("center")})}}, "center", dim);
        return TestFunction::bump(c.front(), param_double(j, "radius"));
    }
    if (kind == "sum") {
        std::vector<std::pair<double, TestFunction>> terms;
        for (const auto& t : require(j, "terms")) terms.emplace_back(param_double(t, "coeff"), parse_test_function(require(t, "f"), dim));
        return TestFunction::combination(terms);
    }
    parse_fail("test function", "unknown kind '" + kind + "'");
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns_.size()) fail(ErrorKind::Precondition, kModule, "CSV row width differs from header");
    rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
    std::ostringstream os;
    for (const auto& c : comments_) os << "# " << c << "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
    os << "\n";
    for (const auto& r : rows_) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
        os << "\n";
    }
    return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Precondition, kModule, "cannot write " + path.string());
    out << text;
}

}  // namespace toric
