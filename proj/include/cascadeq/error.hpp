#pragma once

#include <stdexcept>
#include <string>

namespace cascadeq {

// Argument outside an operation's documented preconditions.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parameters outside the region where a closed form is defined (e.g. rho >= 1).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Iterative method failed to converge or produced a non-finite value.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Statistic undefined for the supplied data (e.g. zero variance).
class UndefinedStatistic : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Cascade field cannot be expressed as a single-server queue.
class UnsupportedMapping : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid experiment configuration. `line` is 0 when the value came from
// a command-line override or a built-in default.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, int line = 0)
      : std::runtime_error(message), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace cascadeq
