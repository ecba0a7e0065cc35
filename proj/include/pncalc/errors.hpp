#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pncalc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Arguments of incompatible shape: index out of range, mismatched
/// algebroids, wrong degree, wrong point length.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Evaluation at a point where the composite is singular (division by a jet
/// with zero constant term, log of a non-positive value, a degenerate
/// endomorphism).
class SingularPointError : public Error {
public:
    using Error::Error;
};

/// Expression-language failure. offset is a byte offset into the source text.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t offset)
        : Error(message + " at offset " + std::to_string(offset)), offset_(offset)
    {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Malformed configuration file or unknown example name.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace pncalc
