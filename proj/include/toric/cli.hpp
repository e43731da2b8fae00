#pragma once

#include "toric/asymptotics.hpp"
#include "toric/io.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace toric {

/// Exit codes: 0 success, 1 assertion failure, then one code per ErrorKind.
enum ExitCode { kExitOk = 0, kExitAssertion = 1, kExitParse = 2, kExitPrecondition = 3, kExitConvergence = 4, kExitGeometry = 5 };

const std::vector<std::string>& cli_tasks();

struct RunOptions {
    std::string task;
    std::filesystem::path scenario;
    std::optional<std::filesystem::path> out;  // write artifacts here; otherwise they go to stdout
    int threads = 1;
    std::optional<double> tolerance;
    DpConvention convention = DpConvention::Corrected;
};

/// Named output files plus a human-readable summary and any failed assertions.
struct Artifacts {
    std::vector<std::pair<std::string, std::string>> files;
    std::vector<std::string> summary;
    std::vector<std::string> failures;
    int exit_code = kExitOk;  // set by tasks whose verdict maps to an error category

    void add(std::string name, std::string text) { files.emplace_back(std::move(name), std::move(text)); }
    void check(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
};

/// Runs one task on a loaded scenario.
Artifacts run_task(const std::string& task, const Scenario& scenario, const RunOptions& options);

/// Loads the scenario, runs the task, writes artifacts, and returns the process exit status.
/// Errors are reported on `err` with the module that raised them.
int run(const RunOptions& options, std::ostream& out, std::ostream& err);

}  // namespace toric
