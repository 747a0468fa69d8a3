#include "synthdim/error.hpp"

#include <fmt/format.h>

#include <utility>

namespace synthdim {

namespace {

std::string config_message(const std::string& what, std::size_t line, const std::string& source) {
  std::string msg = source.empty() ? std::string() : source + ": ";
  if (line > 0) msg += fmt::format("line {}: ", line);
  return msg + what;
}

}  // namespace

ConfigError::ConfigError(const std::string& what, std::string key, std::size_t line, const std::string& source)
    : Error(config_message(what, line, source)), key_(std::move(key)), line_(line), detail_(what) {}

LightLineSingular::LightLineSingular(double theta, double distance)
    : Error(fmt::format("Bloch phase {:.17g} is {:.3g} from a light line", theta, distance)),
      theta_(theta),
      distance_(distance) {}

NumericalError::NumericalError(const std::string& what, double achieved)
    : Error(what), achieved_(achieved) {}

BranchDiscontinuity::BranchDiscontinuity(double phase, double jump, double tolerance)
    : NumericalError(fmt::format("branch jumps by {:.6g} at phase {:.6g} (tolerance {:.6g})",
                                 jump, phase, tolerance),
                     jump) {}

IoError::IoError(const std::string& what, std::string path)
    : Error(fmt::format("{}: {}", path, what)), path_(std::move(path)) {}

}  // namespace synthdim
