#pragma once

#include <stdexcept>
#include <string>

namespace mflqr {

/// Dimension or replication-count mismatch between operands.
class ShapeError : public std::invalid_argument {
 public:
  explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

/// A factor that must be invertible is singular or too ill conditioned.
class SingularityError : public std::runtime_error {
 public:
  SingularityError(std::string factor, const std::string& what)
      : std::runtime_error(what), factor_(std::move(factor)) {}

  /// Name of the offending factor ("inner" or "mean").
  const std::string& factor() const { return factor_; }

 private:
  std::string factor_;
};

/// A numerical operation failed that should be impossible for valid inputs
/// (e.g. Cholesky of a matrix that is positive definite by construction).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Configuration file problem; carries the offending key and line when known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::string key = "", int line = 0)
      : std::runtime_error(format(what, key, line)),
        key_(std::move(key)),
        line_(line) {}

  const std::string& key() const { return key_; }
  int line() const { return line_; }

 private:
  static std::string format(const std::string& what, const std::string& key,
                            int line) {
    std::string msg = what;
    if (!key.empty()) msg += " (key '" + key + "')";
    if (line > 0) msg += " at line " + std::to_string(line);
    return msg;
  }

  std::string key_;
  int line_;
};

}  // namespace mflqr
