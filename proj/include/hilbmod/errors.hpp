#pragma once

#include <stdexcept>
#include <string>

namespace hilbmod {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands whose block profiles or module shapes do not match.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A caller-supplied parameter outside its documented domain (lambda = 0, want > N, ...).
class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// Decomposition failure or conditioning beyond what the tolerances can certify.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

/// An internal consistency check failed. Never expected; signals a bug or tolerance breakdown.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

/// Operation requested on a report whose state does not allow it.
class InvalidState : public Error {
public:
    using Error::Error;
};

/// A unique solve was requested for a non-injective operator.
class FredholmAlternativeError : public Error {
public:
    using Error::Error;
};

}  // namespace hilbmod
