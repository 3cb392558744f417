#pragma once

#include <stdexcept>
#include <string>

namespace bolab {

/// Argument outside an operation's domain (bad s, N < 1, unknown family, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested an exact product into a buffer that cannot hold it.
class ResolutionOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Self-normalized estimate requested from an ensemble whose weights sum to zero.
class DegenerateEnsemble : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration file or flag problem; `field` names the offending key when known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace bolab
