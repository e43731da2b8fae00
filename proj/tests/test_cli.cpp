#include "toric/cli.hpp"
#include "toric/error.hpp"
#include "toric/io.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace toric;
namespace fs = std::filesystem;

namespace {

const fs::path kRoot = TORIC_SOURCE_DIR;

fs::path scratch(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "toric_cli_tests";
    fs::create_directories(dir);
    return dir / name;
}

fs::path write_scenario(const std::string& name, const std::string& body) {
    const fs::path p = scratch(name);
    write_text(p, body);
    return p;
}

struct Outcome {
    int code;
    std::string out, err;
};

Outcome run_cli(const std::string& task, const fs::path& scenario, int threads = 1,
                std::optional<double> tolerance = std::nullopt, DpConvention convention = DpConvention::Corrected) {
    RunOptions o;
    o.task = task;
    o.scenario = scenario;
    o.threads = threads;
    o.tolerance = tolerance;
    o.convention = convention;
    std::ostringstream out, err;
    const int code = run(o, out, err);
    return {code, out.str(), err.str()};
}

std::string model(const std::string& name) { return (kRoot / "fixtures" / name).string(); }

int shell(const std::string& args) {
    const std::string cmd = std::string(TORIC_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("model files round-trip") {
    auto m = load_model(kRoot / "fixtures" / "cp1_perturbed.json");
    CHECK(m.polytope.dim() == 1);
    CHECK(m.cuts.size() == 2);
    CHECK(m.perturbation.terms().size() == 1);
    auto again = parse_model(model_to_json(m), "round-trip");
    CHECK(again.polytope.inequalities() == m.polytope.inequalities());
    CHECK(again.cuts == m.cuts);
    CHECK(model_to_json(again).dump() == model_to_json(m).dump());
}

TEST_CASE("model parse errors name the offending key") {
    auto expect_parse = [](const std::string& text, const std::string& needle) {
        try {
            parse_model(Json::parse(text), "m");
            FAIL("expected a parse error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Parse);
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    expect_parse(R"({"facets": []})", "dim");
    expect_parse(R"({"dim": 1, "facets": [{"normal": [2], "offset": "0"}, {"normal": [-1], "offset": "-1"}]})",
                 "primitive");
    expect_parse(R"({"dim": 1, "facets": [{"normal": [0.5], "offset": "0"}]})", "integers");
    expect_parse(R"({"dim": 1, "facets": [{"normal": [1], "offset": "1/0"}]})", "offset");
    expect_parse(R"({"dim": 2, "facets": [{"normal": [1], "offset": "0"}]})", "facets[0]");
    expect_parse(R"({"schema": 7, "dim": 1, "facets": []})", "schema");
}

TEST_CASE("parameters and test functions") {
    const Json p = Json::parse(R"({"t": "3/10", "u": 0.25, "k": 8, "ks": [1, 2], "pts": [[0.1, 0.2]], "s": "x"})");
    CHECK(param_rational(p, "t") == Rational(3, 10));
    CHECK(param_rational(p, "u") == Rational(1, 4));
    CHECK(param_int(p, "k") == 8);
    CHECK(param_ints(p, "ks") == std::vector<std::int64_t>{1, 2});
    CHECK(param_points(p, "pts", 2).front() == std::vector<double>{0.1, 0.2});
    CHECK_THROWS_AS(param_int(p, "t"), Error);
    CHECK_THROWS_AS(param_points(p, "pts", 1), Error);
    CHECK_THROWS_AS(param_double(p, "missing"), Error);

    auto f = parse_test_function(Json::parse(R"({"kind": "sum", "terms": [
        {"coeff": 2, "f": {"kind": "constant", "value": 1.5}},
        {"coeff": -1, "f": {"kind": "polynomial", "monomials": [{"exponents": [2], "coeff": 1}]}}]})"),
                                 1);
    CHECK(f(std::vector<double>{0.5}) == doctest::Approx(2 * 1.5 - 0.25));
    auto b = parse_test_function(Json::parse(R"({"kind": "bump", "center": [0.5], "radius": 0.2})"), 1);
    CHECK(b(std::vector<double>{0.5}) == doctest::Approx(std::exp(-1.0)));
    CHECK(b(std::vector<double>{0.8}) == 0.0);
    CHECK_THROWS_AS(parse_test_function(Json::parse(R"({"kind": "wavelet"})"), 1), Error);
}

TEST_CASE("number formatting is shortest round-trip") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-0.25) == "-0.25");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
    CsvTable t({"a", "b"});
    t.comment("note");
    t.add_row({"1", "2"});
    CHECK(t.str() == "# note\na,b\n1,2\n");
    CHECK_THROWS_AS(t.add_row({"1"}), Error);
}

TEST_CASE("exit code 2: malformed input") {
    auto bad = write_scenario("bad.json", "{ not json");
    CHECK(run_cli("lattice-count", bad).code == kExitParse);
    auto wrong_type = write_scenario("wrong_type.json", R"({"schema": 1, "task": "density-profile", "model": ")" +
                                                            model("cp1_cut.json") + R"(", "params": {"k": "many"}})");
    auto r = run_cli("density-profile", wrong_type);
    CHECK(r.code == kExitParse);
    CHECK(r.err.find("params.k") != std::string::npos);
    CHECK(run_cli("futaki", kRoot / "scenarios" / "em_square.json").code == kExitParse);
}

TEST_CASE("exit code 3: k incompatible with t") {
    auto s = write_scenario("k7.json", R"({"schema": 1, "task": "density-profile", "model": ")" + model("cp1_cut.json") +
                                           R"(", "params": {"t": "3/10", "k": 7, "grid": 5}})");
    auto r = run_cli("density-profile", s);
    CHECK(r.code == kExitPrecondition);
    CHECK(r.err.find("10") != std::string::npos);
}

TEST_CASE("exit code 4: quadrature cannot meet the tolerance") {
    auto s = write_scenario("tight.json", R"({"schema": 1, "task": "density-profile", "model": ")" +
                                              model("cp1_cut.json") + R"(", "params": {"t": "3/10", "k": 10, "grid": 3}})");
    CHECK(run_cli("density-profile", s, 1, 1e-300).code == kExitConvergence);
}

TEST_CASE("exit code 5: non-Delzant polytope") {
    auto r = run_cli("check-delzant", kRoot / "scenarios" / "delzant_triangle.json");
    CHECK(r.code == kExitGeometry);
    CHECK(r.out.find("\"delzant\": false") != std::string::npos);
    CHECK(run_cli("check-delzant", kRoot / "fixtures" / "square.json").code == kExitOk);
}

TEST_CASE("Futaki task on the tent") {
    auto r = run_cli("futaki", kRoot / "scenarios" / "futaki_cp1_tent.json");
    REQUIRE(r.code == kExitOk);
    const Json j = Json::parse(r.out);
    CHECK(j.dump().find("\"-1/4\"") != std::string::npos);
}

TEST_CASE("Euler-Maclaurin task on the square") {
    auto r = run_cli("em-check", kRoot / "scenarios" / "em_square.json");
    REQUIRE(r.code == kExitOk);
    std::istringstream in(r.out);
    std::string line, header;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header.empty()) {
            header = line;
            CHECK(header.find("residual") != std::string::npos);
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
        std::vector<std::string> cols;
        std::stringstream hs(header);
        for (std::string c; std::getline(hs, c, ',');) cols.push_back(c);
        for (std::size_t i = 0; i < cols.size(); ++i)
            if (cols[i] == "residual") CHECK(cells.at(i) == "1");
        ++rows;
    }
    CHECK(rows == 5);
}

TEST_CASE("artifacts are written to the output directory") {
    RunOptions o;
    o.task = "lattice-count";
    o.scenario = kRoot / "scenarios" / "lattice_square_slice.json";
    o.out = scratch("lattice_out");
    std::ostringstream out, err;
    REQUIRE(run(o, out, err) == kExitOk);
    CHECK(fs::exists(*o.out / "lattice_count.csv"));
    CHECK(out.str().find("wrote") != std::string::npos);
}

TEST_CASE("outputs do not depend on the thread count") {
    for (const auto& [task, scen] : std::vector<std::pair<std::string, std::string>>{
             {"density-profile", "density_square.json"}, {"futaki", "futaki_square.json"}}) {
        auto a = run_cli(task, kRoot / "scenarios" / scen, 1);
        auto b = run_cli(task, kRoot / "scenarios" / scen, 3);
        REQUIRE(a.code == kExitOk);
        CHECK(a.out == b.out);
    }
}

TEST_CASE("the command-line front end maps parse failures to exit code 2") {
    CHECK(shell("") == kExitParse);
    CHECK(shell("no-such-task --scenario x") == kExitParse);
    CHECK(shell("lattice-count") == kExitParse);
    CHECK(shell("lattice-count --scenario /nonexistent.json") == kExitParse);
    CHECK(shell("lattice-count --scenario " + (kRoot / "scenarios" / "lattice_square_slice.json").string() +
                " --dp-convention other") == kExitParse);
    CHECK(shell("lattice-count --scenario " + (kRoot / "scenarios" / "lattice_square_slice.json").string()) == kExitOk);
    CHECK(shell("check-delzant --scenario " + (kRoot / "scenarios" / "delzant_triangle.json").string()) == kExitGeometry);
}

}
