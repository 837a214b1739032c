#pragma once

#include <stdexcept>
#include <string>

namespace orthoplanar {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// lambda <= 0 or c <= 0.
class NonPositiveRate : public Error {
public:
    using Error::Error;
};

/// p < 0, q < 0 or p + q > 1.
class InvalidProbability : public Error {
public:
    using Error::Error;
};

/// Argument outside the open support of a density, or otherwise outside the
/// domain of a closed form.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The closed form does not exist for the given (p, q), e.g. the diagonal
/// density when reflection is impossible.
class UnsupportedRegime : public Error {
public:
    using Error::Error;
};

/// Result does not fit in a double.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// A verification identity failed its tolerance.
class ToleranceExceeded : public Error {
public:
    using Error::Error;
};

}  // namespace orthoplanar
