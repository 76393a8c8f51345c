#pragma once

#include <stdexcept>
#include <string>

namespace flgc {

// Base for everything thrown by this library. Catching flgc::Error at the CLI
// boundary is enough to map failures onto exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Configuration / input problems (exit code 2 territory).
struct ConfigError : Error {
    using Error::Error;
};
struct ShapeMismatch : ConfigError {
    using ConfigError::ConfigError;
};
struct LengthMismatch : ConfigError {
    using ConfigError::ConfigError;
};
struct EmptyInput : ConfigError {
    using ConfigError::ConfigError;
};
struct IndexOutOfRange : ConfigError {
    using ConfigError::ConfigError;
};
struct InvalidLambda : ConfigError {
    using ConfigError::ConfigError;
};
struct EmptyGrid : ConfigError {
    using ConfigError::ConfigError;
};
struct DegenerateInput : ConfigError {
    using ConfigError::ConfigError;
};
struct NotSymmetric : ConfigError {
    using ConfigError::ConfigError;
};
struct ClassTooSmall : ConfigError {
    using ConfigError::ConfigError;
};

// File parsing; carries a 1-based line number when one is known.
struct ParseError : ConfigError {
    explicit ParseError(const std::string& what, long line = -1)
        : ConfigError(line >= 0 ? what + " (line " + std::to_string(line) + ")" : what),
          line_number(line) {}
    long line_number;
};
struct NonNumericFeature : ParseError {
    using ParseError::ParseError;
};
struct MissingLabelColumn : ConfigError {
    using ConfigError::ConfigError;
};

// Numerical failures (exit code 3 territory).
struct NumericalError : Error {
    using Error::Error;
};
struct NotPositiveDefinite : NumericalError {
    using NumericalError::NumericalError;
};
struct ConvergenceFailure : NumericalError {
    using NumericalError::NumericalError;
};
struct NotFinite : NumericalError {
    using NumericalError::NumericalError;
};

}  // namespace flgc
