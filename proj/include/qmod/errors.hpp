#pragma once

#include <stdexcept>
#include <string>

namespace qmod {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Constant term zero (or positive offset): the series has no multiplicative inverse.
struct NonUnitError : Error {
    using Error::Error;
};

// An operand is not exact through the order the operation was asked for.
struct InsufficientOrderError : Error {
    using Error::Error;
};

struct UnknownSuiteError : Error {
    using Error::Error;
};

// Evaluation point outside the admissible half-plane region (im <= 0 or |q| too large).
struct DomainError : Error {
    using Error::Error;
};

// The truncation-tail stopping rule could not be satisfied with the coefficients available.
struct ToleranceNotMetError : Error {
    using Error::Error;
};

// Sample column matrix too ill-conditioned to solve for a multiplier.
struct SingularSamplesError : Error {
    using Error::Error;
};

// Local fundamental matrix ill-conditioned at a sample point.
struct SingularPhiError : Error {
    using Error::Error;
};

// No symmetric involution is compatible with the given T-phases.
struct NoSolutionError : Error {
    using Error::Error;
};

} // namespace qmod
