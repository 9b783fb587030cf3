#pragma once

#include <stdexcept>
#include <string>

namespace talbot {

/// Physics precondition violated (non-positive length, f outside (0, 1], ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed or unreadable configuration. `line()` is 0 when not tied to a line.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// The Fresnel quadrature would need more steps than the configured cap.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace talbot
