#pragma once

#include <stdexcept>
#include <string>

namespace graphon {

// Bad input: domain violations, malformed files, out-of-range parameters.
// Maps to process exit code 2.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Numeric failure: non-convergence, loss of bracketing, solver breakdown.
// Maps to process exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace graphon
