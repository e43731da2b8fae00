#pragma once

#include "toric/density.hpp"
#include "toric/family.hpp"
#include "toric/polynomial.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace toric {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

/// Header line carried by every report: densities and measures are pushed down to P.
constexpr const char* kNormalizationNote = "pushed-down normalization: the (2pi)^n fiber volume is dropped";

/// A polytope definition file: base facets, optional cuts and an optional polynomial perturbation.
struct ModelFile {
    std::string name;
    Polytope polytope;
    std::vector<AffineFunctional> cuts;
    Polynomial perturbation;

    bool has_family() const { return !cuts.empty(); }
    MovingFamily family() const;
};

/// Parse errors carry the source name and the offending key.
ModelFile parse_model(const Json& j, const std::string& source);
ModelFile load_model(const std::filesystem::path& path);
Json model_to_json(const ModelFile& m);

Json read_json(const std::filesystem::path& path);

/// A scenario: which model to load, which task to run, and the task parameters.
/// A bare model file is also accepted as a scenario with default parameters.
struct Scenario {
    std::string name;
    std::string task;  // empty when the scenario does not pin one
    std::filesystem::path model_path;
    ModelFile model;
    Json params = Json::object();
};

Scenario load_scenario(const std::filesystem::path& path);

// Typed access to scenario parameters; missing or malformed values raise Error(Parse) naming the key.
bool has_param(const Json& params, const std::string& key);
Rational param_rational(const Json& params, const std::string& key);
std::vector<Rational> param_rationals(const Json& params, const std::string& key);
double param_double(const Json& params, const std::string& key);
std::int64_t param_int(const Json& params, const std::string& key);
std::vector<std::int64_t> param_ints(const Json& params, const std::string& key);
std::vector<std::vector<double>> param_points(const Json& params, const std::string& key, int dim);
std::string param_string(const Json& params, const std::string& key);

/// {"kind":"constant","value":c} | {"kind":"polynomial","monomials":[...]} |
/// {"kind":"bump","center":[...],"radius":r} | {"kind":"sum","terms":[{"coeff":c,"f":{...}}]}
TestFunction parse_test_function(const Json& j, int dim);
Polynomial parse_polynomial(const Json& j, int dim);

Json rational_vector_json(const RVec& v);

/// Shortest round-trip decimal form of a double; identical input gives identical text.
std::string format_double(double x);

/// CSV text with a comment header. Cells are written as given.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}
    void comment(std::string line) { comments_.push_back(std::move(line)); }
    void add_row(std::vector<std::string> cells);
    std::string str() const;
    std::size_t rows() const { return rows_.size(); }

private:
    std::vector<std::string> comments_;
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace toric
