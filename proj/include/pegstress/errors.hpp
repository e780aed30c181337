#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pegstress {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input or parameter violates a documented invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class AlignmentError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : ValidationError("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class GapError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Synthetic scenario description cannot be realised.
class SpecError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class StabilityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// File system failures; the CLI maps these to exit code 2.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace pegstress
