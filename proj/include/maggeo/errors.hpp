#pragma once

#include <stdexcept>
#include <string>

namespace maggeo {

/// Input violates an operation precondition (bad index, non-convex
/// potential, insufficient margin, ...).
class PreconditionError : public std::runtime_error {
public:
    explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

/// The gradient range of a convex function does not cover the requested
/// dual box, so a Legendre-type transform would be evaluated where its
/// sup is attained on the boundary.
class RangeCoverageError : public std::runtime_error {
public:
    explicit RangeCoverageError(const std::string& what) : std::runtime_error(what) {}
};

/// A scenario/config file failed to parse or validate. `line` is 1-based
/// when known, 0 otherwise.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line = 0)
        : std::runtime_error(what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

}  // namespace maggeo
