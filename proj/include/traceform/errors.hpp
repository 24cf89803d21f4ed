#pragma once

#include <stdexcept>
#include <string>

namespace traceform {

/// Failure categories. The CLI maps them onto exit codes 2, 3 and 4.
enum class ErrorKind { Validation, Precondition, Io };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Malformed input: overlapping components, unsorted grids, bad JSON fields.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

/// A mathematical precondition of an operation does not hold for the given data.
/// Messages name the violated condition.
class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& what) : Error(ErrorKind::Precondition, what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

}  // namespace traceform
