#pragma once

#include <stdexcept>
#include <string>

namespace seki {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Structurally invalid input: dimension mismatch, wrong ensemble size, ...
struct StructuralError : Error {
    using Error::Error;
};

// Semantically invalid argument value (negative standard deviation, |r| > 1, ...).
struct ArgumentError : Error {
    using Error::Error;
};

// Invalid or inconsistent experiment configuration. CLI exit code 2.
struct ConfigError : Error {
    using Error::Error;
};

// Numerical failure (factorization breakdown, blow-up). CLI exit code 3.
struct NumericalError : Error {
    using Error::Error;
};

// Filesystem / parsing failure. CLI exit code 4.
struct IoError : Error {
    using Error::Error;
};

}  // namespace seki
