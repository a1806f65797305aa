#pragma once

#include <stdexcept>
#include <string>

namespace qfel {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed to converge or to meet its tolerance.
class NumericError : public Error {
public:
    using Error::Error;
};

/// A sampled curve could not be analysed (for example no interior maximum).
class AnalysisError : public Error {
public:
    using Error::Error;
};

/// The configuration lies outside the gain bandwidth |delta| < 2 alpha_N.
class NoGainError : public Error {
public:
    using Error::Error;
};

/// Missing or malformed configuration input.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace qfel
