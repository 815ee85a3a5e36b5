#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace natcurve {

/// Broad failure categories; the CLI maps them onto exit codes.
enum class ErrorKind {
    Parse,           ///< malformed expression or file
    Domain,          ///< evaluation outside a function's domain / non-finite value
    Validation,      ///< inputs violate a precondition (domain, parameters, method)
    Classification,  ///< profile is not of the class an operation requires
    Numerical,       ///< quadrature/integration/finite-difference breakdown
    Io
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(ErrorKind::Parse, what + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

class ClassificationError : public Error {
public:
    explicit ClassificationError(const std::string& what) : Error(ErrorKind::Classification, what) {}
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

}  // namespace natcurve
