#pragma once

#include <stdexcept>
#include <string>

namespace hlmax {

// Argument outside the mathematical domain of an operation (negative radius,
// nonpositive lambda, k < 1 for the modified operator, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A query fell outside the range a finite object was built for.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Invalid parameters for a measure or for the block construction.
class ConstructionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed measure file, inline nu spec, or grid spec.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace hlmax
