#pragma once

#include <stdexcept>
#include <string>

namespace powsec {

/// Base of every domain error raised by the library. The CLI maps the
/// concrete subclass onto its exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Unreadable or invalid input data (CSV rows, dates, gaps, duplicates).
class DataError : public Error {
public:
    using Error::Error;
};

/// Numerical failure: rank deficiency, no bracket, non-convergence.
class NumericError : public Error {
public:
    using Error::Error;
};

/// The unit-root pretests found a series integrated of order two or higher,
/// for which bounds-test critical values do not apply.
class PretestRefusal : public Error {
public:
    using Error::Error;
};

}  // namespace powsec
