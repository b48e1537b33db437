#pragma once

#include <stdexcept>
#include <string>

namespace heislab {

// Input outside the admissible domain of an operation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Evaluation on the diagonal or at the kernel singularity.
struct SingularityError : std::domain_error {
    using std::domain_error::domain_error;
};

// Quadrature or fit failure.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A constructed object failed its own audit.
struct ConstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DiscretizationError : std::domain_error {
    using std::domain_error::domain_error;
};

struct IterationError : std::runtime_error {
    IterationError(const std::string& what, double residual)
        : std::runtime_error(what), residual(residual) {}
    double residual;
};

struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace heislab
