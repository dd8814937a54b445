// errors.hpp — Error categories; each maps to a distinct CLI exit code.

#pragma once

#include <stdexcept>
#include <string>

namespace qbat {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Operator/state shapes do not match.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Input fails a physical precondition (non-Hermitian operator, non-unit
// trace, negative eigenvalue beyond tolerance, out-of-range parameter).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Numerical failure during integration or root finding (unstable step
// size, positivity breach, bracket without sign change).
class NumericsError : public Error {
public:
    using Error::Error;
};

// Malformed configuration file, flag, or preset name.
class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace qbat
