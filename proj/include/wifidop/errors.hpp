#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace wifidop {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A unit-conversion input was not a finite number.
class InvalidUnit : public Error {
public:
    using Error::Error;
};

/// A power value that must be strictly positive was zero or negative.
class NonPositivePower : public Error {
public:
    using Error::Error;
};

/// A distance that must be strictly positive was zero or negative.
class InvalidDistance : public Error {
public:
    using Error::Error;
};

/// The requested direction (forward prediction) is not defined for the model.
class UnsupportedDirection : public Error {
public:
    using Error::Error;
};

/// A scan references an access point that is not part of the environment.
class UnknownAp : public Error {
public:
    using Error::Error;
};

/// The user position coincides with an access point, so no unit direction exists.
class DegenerateRange : public Error {
public:
    using Error::Error;
};

/// Fewer usable observations than the positioning dimension requires.
class InsufficientObservations : public Error {
public:
    using Error::Error;
};

/// The normal matrix of the linearized system is singular.
class SingularGeometry : public Error {
public:
    using Error::Error;
};

/// A coverage cell is too small for the compactness indicator to be defined.
class CellTooSmall : public Error {
public:
    using Error::Error;
};

/// A pixel passed to a cell operation is not a member of the cell.
class InvalidPixel : public Error {
public:
    using Error::Error;
};

/// A floor or array index is out of range.
class IndexError : public Error {
public:
    using Error::Error;
};

/// A file could not be read or its syntax is malformed.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A parsed value violates a domain invariant; carries the offending field name.
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& message)
        : Error("invalid field '" + field + "': " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace wifidop
