#pragma once

#include <stdexcept>
#include <string>

namespace morseflow {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An operation was called on inputs violating its documented precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A configuration file or command line could not be interpreted.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace morseflow
