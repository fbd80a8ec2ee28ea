#pragma once

#include <stdexcept>
#include <string>

namespace polaron {

/// Malformed or invalid configuration. `key()` names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// A numerical procedure failed (quadrature budget, step-size underflow,
/// short horizon, undefined ratio).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what, double detail = 0.0)
      : std::runtime_error(what), detail_(detail) {}

  /// Error estimate, time of failure or offending value, depending on the source.
  double detail() const noexcept { return detail_; }

 private:
  double detail_;
};

}  // namespace polaron
