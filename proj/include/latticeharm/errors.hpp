#pragma once

#include <stdexcept>
#include <string>

namespace latticeharm {

/// Base class for all latticeharm errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input that fails a precondition or schema check.
class ValidationError : public Error {
public:
    using Error::Error;
};

class SingularBasis : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class IllConditioned : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class RadiusTooLarge : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NyquistViolation : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class LatticeMismatch : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class TailTooLarge : public Error {
public:
    using Error::Error;
};

class InsufficientSupport : public Error {
public:
    using Error::Error;
};

class DegenerateFit : public Error {
public:
    using Error::Error;
};

class ZeroSeries : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class BackwardBlowup : public Error {
public:
    using Error::Error;
};

}  // namespace latticeharm
