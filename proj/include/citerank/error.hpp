#pragma once

#include <stdexcept>
#include <string>

namespace citerank {

// Categories line up with the CLI exit-code contract (usage=1, data=2, io=3).
enum class ErrorKind { usage = 1, data = 2, io = 3, domain = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error(ErrorKind::usage, what) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

/// Mathematically undefined request (zero USI inversion, degenerate correlation input).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

}  // namespace citerank
