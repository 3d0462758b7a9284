#pragma once

#include <stdexcept>
#include <string>

namespace ideq {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid problem size (too small, or beyond an exact solver's limit).
struct SizeError : Error {
    using Error::Error;
};

/// Mismatched dimensions between two objects (instance vs tour vs field).
struct DimensionError : Error {
    using Error::Error;
};

/// A value outside its mathematical domain (e.g. non-positive reference length).
struct DomainError : Error {
    using Error::Error;
};

/// Bad configuration (schedule parameters, solver settings, ...).
struct ConfigError : Error {
    using Error::Error;
};

/// Timestep outside the schedule range.
struct TimestepError : Error {
    using Error::Error;
};

/// Invalid 2-change move indices.
struct MoveError : Error {
    using Error::Error;
};

/// Malformed input file; carries a 1-based line number when known.
struct ParseError : Error {
    ParseError(const std::string& msg, int line = 0)
        : Error(line > 0 ? msg + " (line " + std::to_string(line) + ")" : msg), line_number(line) {}
    int line_number = 0;
};

/// Recognized but unsupported input format.
struct UnsupportedFormatError : Error {
    using Error::Error;
};

/// Bad training data (non-Hamiltonian label, empty dataset, ...).
struct DataError : Error {
    using Error::Error;
};

}  // namespace ideq
