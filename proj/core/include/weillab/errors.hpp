#pragma once

#include <stdexcept>
#include <string>

namespace weillab {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DivisionByZero : Error {
    using Error::Error;
};
struct FieldMismatch : Error {
    using Error::Error;
};
struct DomainError : Error {
    using Error::Error;
};
struct ShapeError : Error {
    using Error::Error;
};
struct Unsupported : Error {
    using Error::Error;
};
struct NotInCayleyDomain : Error {
    using Error::Error;
};
struct NotRegular : Error {
    using Error::Error;
};
struct BadPrime : Error {
    using Error::Error;
};
struct StructureViolation : Error {
    using Error::Error;
};
struct FactorizationFailed : Error {
    using Error::Error;
};
struct EmptyEigenspace : Error {
    using Error::Error;
};
struct EigenvectorInput : Error {
    using Error::Error;
};
struct BoundViolation : Error {
    using Error::Error;
};
struct SelfReducibilityFailure : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace weillab
