#pragma once

#include <stdexcept>
#include <string>

namespace midasvol {

/// Base class for recoverable failures raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input data that violates a series or panel invariant (bad rows, gaps, zero variance).
class DataError : public Error {
public:
    using Error::Error;
};

/// Invalid run configuration (CLI layer).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A parameter point outside the admissible region of a model.
class InfeasibleParameters : public Error {
public:
    using Error::Error;
};

}  // namespace midasvol
