#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace foldasp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class ArityError : public Error {
 public:
  using Error::Error;
};

class UnsafeClauseError : public Error {
 public:
  UnsafeClauseError(const std::string& message, std::string variable)
      : Error(message), variable_(std::move(variable)) {}
  const std::string& variable() const { return variable_; }

 private:
  std::string variable_;
};

class GuessSpaceExceeded : public Error {
 public:
  using Error::Error;
};

class LearnerError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace foldasp
