#pragma once

#include <stdexcept>
#include <string>

namespace nudgelab {

/// Invalid parameters or configuration values. `key()` names the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what),
        key_(std::move(key)),
        detail_(what) {}
  const std::string& key() const noexcept { return key_; }
  /// Message without the key prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string key_;
  std::string detail_;
};

/// An operation was called with arguments in the wrong representation or on
/// mismatched grids.
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Odd-order derivative requested in a sine or cosine basis.
class ParityError : public UsageError {
 public:
  using UsageError::UsageError;
};

/// A trajectory produced non-finite values.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(double time, std::string trajectory)
      : std::runtime_error("non-finite state in " + trajectory + " trajectory at t = " +
                           std::to_string(time)),
        time_(time),
        trajectory_(std::move(trajectory)) {}
  double time() const noexcept { return time_; }
  const std::string& trajectory() const noexcept { return trajectory_; }

 private:
  double time_;
  std::string trajectory_;
};

/// Not enough usable samples for a log-linear decay fit.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem failure while exporting or reading results.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nudgelab
