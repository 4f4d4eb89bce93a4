#pragma once

#include <stdexcept>
#include <string>

namespace maxcorr {

// Bad inputs: malformed files, violated preconditions, inconsistent data.
// The CLI maps these to exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failures: non-convergence, factorization breakdown, solver
// trouble. The CLI maps these to exit code 2.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Correlation with a sure or impossible defaulter (p in {0,1}) is undefined:
// the indicator has zero variance. Raised instead of returning a limit value.
class DegenerateMarginalError : public ValidationError {
public:
    explicit DegenerateMarginalError(const std::string& msg) : ValidationError(msg) {}
};

// A pairwise default correlation that no joint distribution can realize.
// Carries the offending (negative) probability.
class InconsistentCorrelationError : public ValidationError {
public:
    InconsistentCorrelationError(const std::string& msg, double offending)
        : ValidationError(msg), offending_value(offending) {}
    double offending_value;
};

} // namespace maxcorr
