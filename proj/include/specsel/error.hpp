#pragma once

#include <stdexcept>
#include <string>

namespace specsel {

// Base for every error the library raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: malformed files, invalid parameters, schema violations.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Parse failure in a line-oriented text file; carries the 1-based line.
class ParseError : public ConfigError {
 public:
  ParseError(const std::string& detail, std::size_t line, const std::string& source = {})
      : ConfigError((source.empty() ? "" : source + ": ") + "line " + std::to_string(line) + ": " + detail),
        detail_(detail),
        line_(line) {}

  const std::string& detail() const noexcept { return detail_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string detail_;
  std::size_t line_;
};

// Numerical failure (eigensolver non-convergence and the like).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace specsel
