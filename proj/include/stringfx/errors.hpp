#pragma once

#include <stdexcept>
#include <string>

namespace stringfx {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input text (CSV, config, grid files).
class ParseError : public Error {
public:
    using Error::Error;
};

// Well-formed input that violates a data invariant (ask < bid, decreasing
// timestamps, non-finite price).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Window or index outside the available series.
class BoundsError : public Error {
public:
    using Error::Error;
};

// Invalid parameter value or combination.
class ParameterError : public Error {
public:
    using Error::Error;
};

// Numeric failure: division by zero price, degenerate window, undefined
// statistic (zero variance).
class NumericError : public Error {
public:
    using Error::Error;
};

// Selection over an empty candidate set (all grid points failed).
class NoCandidateError : public Error {
public:
    using Error::Error;
};

} // namespace stringfx
