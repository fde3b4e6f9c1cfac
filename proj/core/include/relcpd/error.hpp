#pragma once

#include <stdexcept>
#include <string>

namespace relcpd {

/// Base for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (CSV, key=value files).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Well-formed input whose contents cannot be used (empty, fully missing, ...).
class DataError : public Error {
public:
    using Error::Error;
};

/// Argument outside the documented domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

} // namespace relcpd
