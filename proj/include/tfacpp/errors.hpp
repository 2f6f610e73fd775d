#pragma once

#include <stdexcept>
#include <string>

namespace tfacpp {

// Malformed input file (bad JSON, wrong types, missing keys).
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally valid file whose content violates an instance invariant.
// The message lists every violation found, one per line.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Solver misuse or internal numerical failure. Infeasible/unbounded models
// are reported through SolveResult::status, not through this exception.
struct SolveError : std::runtime_error {
    explicit SolveError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tfacpp
