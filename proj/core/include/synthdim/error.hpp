#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace synthdim {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration value or malformed config file.
class ConfigError : public Error {
 public:
  /// Message reads "<source>: line <line>: <what>", omitting empty parts.
  explicit ConfigError(const std::string& what, std::string key = {}, std::size_t line = 0,
                       const std::string& source = {});

  const std::string& key() const noexcept { return key_; }
  std::size_t line() const noexcept { return line_; }
  /// Message without the line prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string key_;
  std::size_t line_;
  std::string detail_;
};

/// A Bloch momentum sits on the light line, where the 1/r lattice sum
/// diverges logarithmically. The caller has to move the grid point.
class LightLineSingular : public Error {
 public:
  LightLineSingular(double theta, double distance);

  double theta() const noexcept { return theta_; }
  double distance() const noexcept { return distance_; }

 private:
  double theta_;
  double distance_;
};

/// A numerical contract (residual bound, trace identity, PSD check) failed.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what, double achieved = 0.0);

  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// Branch tracking found a jump larger than the tolerance.
class BranchDiscontinuity : public NumericalError {
 public:
  BranchDiscontinuity(double phase, double jump, double tolerance);
};

class IoError : public Error {
 public:
  IoError(const std::string& what, std::string path);

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace synthdim
