#ifndef SO2KIT_ERRORS_HPP
#define SO2KIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace so2kit {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed formula text. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Input lies outside the fragment an operation is defined on.
class FragmentError : public Error {
 public:
  using Error::Error;
};

/// An enumeration cap was exceeded; the request is infeasible, not wrong.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Lookup of a variable the interpretation does not assign, or an arity mismatch.
class BindingError : public Error {
 public:
  using Error::Error;
};

}  // namespace so2kit

#endif
