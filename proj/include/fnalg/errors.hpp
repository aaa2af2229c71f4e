#pragma once

#include <stdexcept>
#include <string>

namespace fnalg {

/// Base class for everything this library throws.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A function was evaluated outside its domain (log of a non-positive
/// value, division by zero, permutation index out of range, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// An operation required a capability tier (invertible, differentiable)
/// the object does not carry.
class CapabilityError : public Error {
public:
    using Error::Error;
};

/// Roundtrip or agreement validation failed at construction time.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Vector/matrix dimensions do not line up.
class DimensionError : public Error {
public:
    using Error::Error;
};

class SingularMatrixError : public Error {
public:
    using Error::Error;
};

/// Quadrature failed to converge within the refinement budget.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Catalog lookup miss.
class NotFoundError : public Error {
public:
    using Error::Error;
};

/// Too few data points for an estimator.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Data admit no usable estimate (e.g. zero spread).
class DegenerateDataError : public Error {
public:
    using Error::Error;
};

/// Expression-text error; carries the character position.
class ParseError : public Error {
public:
    ParseError(std::size_t position, const std::string& what)
        : Error("parse error at " + std::to_string(position) + ": " + what),
          position_(position) {}

    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

}  // namespace fnalg
