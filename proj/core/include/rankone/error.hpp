#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rankone {

// Base of every exception thrown by the library. The command-line tool maps
// the concrete subclasses onto its exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed textual input. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(std::string const& msg, std::size_t line, std::size_t column)
      : Error(format(msg, line, column)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(std::string const& msg, std::size_t line,
                            std::size_t column) {
    if (line == 0) {
      return msg;
    }
    return std::to_string(line) + ":" + std::to_string(column) + ": " + msg;
  }

  std::size_t line_;
  std::size_t column_;
};

// An operation was called outside its domain (wrong deficiency, identity
// word where a non-trivial one is required, non-injective map, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A self-check on a computed certificate failed. This always indicates either
// a bug or a counterexample to a theorem the computation relies on, and is
// never silently recovered from.
class CertificationError : public Error {
 public:
  using Error::Error;
};

// A search ran out of its step, coset or wall-clock budget. This is not a
// negative answer.
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

}  // namespace rankone
