#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ratebench {

// Base for every error the harness raises on purpose. The CLI maps the
// concrete subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or invalid suite configuration / command-line usage.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Schedule construction rejected its inputs.
class ScheduleError : public Error {
 public:
  using Error::Error;
};

// A data file (run log, .bb trace, counter CSV) failed to parse.
// line() is 1-based, 0 when the error is not tied to a line.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : what + " (line " + std::to_string(line) + ")"),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// The run could not be carried out (unresolvable executable, staging failure).
class ExecutionError : public Error {
 public:
  using Error::Error;
};

// Filesystem trouble writing an artifact.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ratebench
