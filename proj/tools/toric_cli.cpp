#include "toric/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Partial Bergman densities, Euler-Maclaurin sums and toric stability on Delzant polytopes"};
    app.require_subcommand(1);

    toric::RunOptions options;
    std::string scenario, out, convention = "corrected";
    double tolerance = 0.0;

    for (const auto& task : toric::cli_tasks()) {
        auto* sub = app.add_subcommand(task);
        sub->add_option("--scenario", scenario, "scenario or model file (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out, "directory for CSV/JSON artifacts (default: print to stdout)");
        sub->add_option("--threads", options.threads, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--tolerance", tolerance, "relative quadrature tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--dp-convention", convention, "coefficient of the corner measure dp")
            ->check(CLI::IsMember({"corrected", "printed"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : toric::kExitParse;
    }

    options.task = app.get_subcommands().front()->get_name();
    options.scenario = scenario;
    if (!out.empty()) options.out = out;
    if (tolerance > 0.0) options.tolerance = tolerance;
    options.convention = toric::parse_dp_convention(convention);
    return toric::run(options, std::cout, std::cerr);
}
