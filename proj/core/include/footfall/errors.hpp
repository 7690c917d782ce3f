#pragma once

#include <stdexcept>
#include <string>

namespace footfall {

// Base class for every error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid configuration or parameter values.
struct ConfigError : Error { using Error::Error; };

// File missing, unreadable or unwritable.
struct IoError : Error { using Error::Error; };

// Malformed file contents; the message names the offending row/field.
struct ParseError : Error { using Error::Error; };

// Mismatched dimensions between inputs.
struct ShapeError : Error { using Error::Error; };

// Input on which the operation is mathematically undefined
// (all-zero signal, zero-variance samples, ...).
struct DegenerateInputError : Error { using Error::Error; };

// Filter design produced an unusable realization.
struct DesignError : Error { using Error::Error; };

// Requested window or index range falls outside the signal.
struct BoundaryError : Error { using Error::Error; };

// Iterative solver failed to converge within its cap.
struct ConvergenceError : Error { using Error::Error; };

// A generation pipeline produced fewer items than requested.
struct ShortfallError : Error { using Error::Error; };

// Non-finite value encountered during computation.
struct NumericError : Error { using Error::Error; };

} // namespace footfall
