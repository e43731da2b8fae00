#pragma once

#include <stdexcept>
#include <string>

namespace toric {

/// Failure categories. The CLI maps each one to its own exit code.
enum class ErrorKind {
    Parse = 2,
    Precondition = 3,
    Convergence = 4,
    Geometry = 5,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string module, const std::string& what)
        : std::runtime_error(module + ": " + what), kind_(kind), module_(std::move(module)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& module() const noexcept { return module_; }

private:
    ErrorKind kind_;
    std::string module_;
};

/// Adaptive quadrature ran out of depth; carries the best estimate so far.
class ConvergenceError : public Error {
public:
    ConvergenceError(std::string module, const std::string& what, double best, double delta)
        : Error(ErrorKind::Convergence, std::move(module), what), best_(best), delta_(delta) {}

    double best_estimate() const noexcept { return best_; }
    double last_delta() const noexcept { return delta_; }

private:
    double best_;
    double delta_;
};

[[noreturn]] inline void fail(ErrorKind kind, const char* module, const std::string& what) {
    throw Error(kind, module, what);
}

}  // namespace toric
