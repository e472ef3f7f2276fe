#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gridot {

// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// An integer quantity left the arithmetic budget (63-bit masses, 128-bit objective).
class OverflowError : public Error {
 public:
  using Error::Error;
};

// A size limit was exceeded (dense pair count, oracle budget).
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// The simplex finished with positive flow on artificial arcs: the arc set
// admits no coupling with the requested marginals.
class InfeasibleRestriction : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::int64_t line, std::int64_t column)
      : Error(what + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::int64_t line() const noexcept { return line_; }
  std::int64_t column() const noexcept { return column_; }

 private:
  std::int64_t line_;
  std::int64_t column_;
};

}  // namespace gridot
