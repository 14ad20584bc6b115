#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sprd {

/// Invalid input or configuration (bad N, non-integral T/dt, unknown example...).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical failure during a solve or an eigenvalue estimate.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Singular or numerically unusable pivot block in the block-tridiagonal solve.
class SolverError : public NumericalError {
public:
    SolverError(const std::string& what, std::size_t node)
        : NumericalError(what + " (node " + std::to_string(node) + ")"), node_(node) {}

    [[nodiscard]] std::size_t node() const noexcept { return node_; }

private:
    std::size_t node_;
};

}  // namespace sprd
