#pragma once

#include <stdexcept>
#include <string>

namespace smoothcert {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Attack budget larger than the smoothing radius.
class BudgetError : public DomainError {
public:
    using DomainError::DomainError;
};

// Shapes or noises that do not fit together (dimension mismatch, non-concentric, ...).
class GeometryError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class IsotropyError : public GeometryError {
public:
    using GeometryError::GeometryError;
};

// Observed responses not achievable by any candidate set.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConstraintViolation : public InfeasibleError {
public:
    using InfeasibleError::InfeasibleError;
};

class NonBracketingError : public InfeasibleError {
public:
    NonBracketingError(const std::string& what, double achieved)
        : InfeasibleError(what), achieved_(achieved)
    {
    }

    [[nodiscard]] double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

// Observations that no member of the assumed parametric family can produce.
class InconsistencyError : public InfeasibleError {
public:
    using InfeasibleError::InfeasibleError;
};

} // namespace smoothcert
