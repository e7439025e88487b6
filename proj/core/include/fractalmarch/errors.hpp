#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fractalmarch {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed scene or message text. Line and column are 1-based.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(what), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// A well-formed document that violates an invariant. `path()` names the
/// offending field, e.g. "instances[0].degree".
class ValidationError : public Error {
public:
    ValidationError(std::string path, const std::string& reason)
        : Error(path + ": " + reason), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class SingularTransform : public Error {
public:
    using Error::Error;
};

class DegenerateBasis : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace fractalmarch
