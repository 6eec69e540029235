#pragma once

#include <stdexcept>
#include <string>

namespace diol {

// Base class for pipeline/domain failures. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed row or header in a CSV input; carries the 1-based line number.
class CsvError : public Error {
 public:
  CsvError(int line, const std::string& msg)
      : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

// Violated training precondition or degenerate training result.
class TrainError : public Error {
 public:
  using Error::Error;
};

}  // namespace diol
