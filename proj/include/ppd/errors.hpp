#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace ppd {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A photon number outside the truncated Fock space was requested, or
/// population leaked to the truncation edge during evolution.
class TruncationError : public Error {
 public:
  explicit TruncationError(const std::string& what) : Error(what) {}

  TruncationError(double time, double tail, double threshold)
      : Error(describe(time, tail, threshold)), time_(time), tail_(tail) {}

  double time() const { return time_; }
  double tail() const { return tail_; }

 private:
  static std::string describe(double time, double tail, double threshold) {
    std::ostringstream os;
    os << "truncation tail " << tail << " exceeds threshold " << threshold
       << " at t = " << time;
    return os.str();
  }

  double time_ = 0.0;
  double tail_ = 0.0;
};

/// A stationary quantity was not stationary (input was not a converged fixed point).
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

/// Configuration parse or validation failure. `key()` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& message)
      : Error(key.empty() ? message : "'" + key + "': " + message), key_(std::move(key)) {}

  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

}  // namespace ppd
