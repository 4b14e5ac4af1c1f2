#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace petallab {

/// Argument outside the domain of an operation (point outside the open disk,
/// on a branch cut, not on the boundary, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A conformal chain rejected a point; carries the index of the failing step.
class ChainError : public DomainError {
public:
    ChainError(std::size_t step, const std::string& what)
        : DomainError("step " + std::to_string(step) + ": " + what), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// Backward flow requested at a point that lies in no petal.
class PetalRequiredError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A numeric limit or fit did not behave (no stabilization, degenerate grid).
class EstimationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace petallab
