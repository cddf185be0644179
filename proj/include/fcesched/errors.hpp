#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fcesched {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
  public:
    using Error::Error;
};

class EmptyInputError : public Error {
  public:
    using Error::Error;
};

class IndexError : public Error {
  public:
    using Error::Error;
};

class DimensionError : public Error {
  public:
    using Error::Error;
};

class DomainError : public Error {
  public:
    using Error::Error;
};

class SizeError : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
};

class UsageError : public Error {
  public:
    using Error::Error;
};

/// Raised when a bitstring violates the one-hot constraint. Carries the
/// order indices whose rows do not hold exactly one set bit.
class InfeasibleError : public Error {
  public:
    explicit InfeasibleError(std::vector<std::size_t> orders);

    [[nodiscard]] const std::vector<std::size_t> &orders() const noexcept {
        return orders_;
    }

  private:
    std::vector<std::size_t> orders_;
};

/// Malformed input file. `line()` is 1-based; 0 when not line-specific.
class ParseError : public Error {
  public:
    ParseError(std::size_t line, const std::string &what);

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

} // namespace fcesched
