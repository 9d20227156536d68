#pragma once

#include <stdexcept>
#include <string>

namespace energentic {

/// Invalid configuration value or document. `key()` names the offending
/// field as a dotted path (e.g. "environment.eta").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// An operation was called outside its precondition (stepping a terminal
/// state, metrics over an empty trajectory, ...).
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Grid coordinate outside the environment.
class BoundsError : public std::out_of_range {
 public:
  BoundsError(std::string axis, const std::string& what)
      : std::out_of_range(what), axis_(std::move(axis)) {}

  const std::string& axis() const noexcept { return axis_; }

 private:
  std::string axis_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace energentic
