#ifndef BGNER_ERROR_HPP
#define BGNER_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bgner {

/// Malformed input data (corpus lines, gazetteer files, model files, ...).
/// Carries the 1-based line number when one is known (0 otherwise).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& message, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message
                                : message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Invalid configuration: missing resource paths, contradictory switches,
/// unknown keys. Distinct from DataError so the CLI can map exit codes.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bgner

#endif
