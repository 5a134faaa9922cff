#pragma once

#include <stdexcept>
#include <string>

namespace haar {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller supplied something the operation cannot accept.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A vector or quaternion that must be unit length is not.
class NormalizationError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class DimensionError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Point outside a chart domain, or too close to its boundary for a stencil.
class DomainError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class UnknownTag : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Tensor size guard tripped.
class CapacityError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// The computation ran but its result cannot be trusted.
class NumericalError : public Error {
public:
    using Error::Error;
};

class SingularChartError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DegenerateChartError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace haar
