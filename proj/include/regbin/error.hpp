#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace regbin {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input document. line() is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(std::string const& message, std::size_t line = 0);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Min-max scaling over a scope whose values are all equal.
class DegenerateScaleError : public Error {
 public:
  using Error::Error;
};

class IntegrationError : public Error {
 public:
  IntegrationError(std::string const& message, double last_valid_time)
      : Error(message), last_valid_time_(last_valid_time) {}
  double last_valid_time() const noexcept { return last_valid_time_; }

 private:
  double last_valid_time_;
};

}  // namespace regbin
