#pragma once

#include <stdexcept>
#include <string>

namespace resetruin {

/// Invalid parameter or argument outside the model's domain.
struct DomainError : std::invalid_argument {
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Quantity would leave double range for the requested parameters.
struct RangeError : std::range_error {
    explicit RangeError(const std::string& what) : std::range_error(what) {}
};

/// Fixed-point iteration hit its iteration budget.
struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Reset sites are not closed under z -> a - z.
struct SymmetryError : std::invalid_argument {
    explicit SymmetryError(const std::string& what) : std::invalid_argument(what) {}
};

/// A simulated trajectory exceeded its step cap.
struct IterationCapError : std::runtime_error {
    explicit IterationCapError(const std::string& what) : std::runtime_error(what) {}
};

/// Bisection objective vanishes identically (unbiased walk).
struct DegenerateError : std::runtime_error {
    explicit DegenerateError(const std::string& what) : std::runtime_error(what) {}
};

struct NoSignChangeError : std::runtime_error {
    explicit NoSignChangeError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace resetruin
