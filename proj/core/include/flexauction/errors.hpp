#pragma once

#include <stdexcept>
#include <string>

namespace flexauction {

// Malformed inputs: bad dimensions, non-decreasing prices, priors that do not
// sum to one, schema violations.
struct ValidationError : std::invalid_argument {
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// A valuation queried outside the support of the reported level.
struct DomainError : std::domain_error {
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Density is zero where a positive density is required.
struct SingularDensityError : std::domain_error {
    explicit SingularDensityError(const std::string& what) : std::domain_error(what) {}
};

// A served consumer carries a threshold no valuation in its support can clear.
struct InconsistentTraceError : std::logic_error {
    explicit InconsistentTraceError(const std::string& what) : std::logic_error(what) {}
};

// The served indicator failed to be a non-decreasing step in the own report.
struct MonotonicityViolationError : std::logic_error {
    explicit MonotonicityViolationError(const std::string& what) : std::logic_error(what) {}
};

// Exhaustive search was asked to enumerate past its guard bounds.
struct SizeGuardError : std::length_error {
    explicit SizeGuardError(const std::string& what) : std::length_error(what) {}
};

// A computed decision pair violated its own feasibility constraints.
struct InternalConsistencyError : std::logic_error {
    explicit InternalConsistencyError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace flexauction
