#pragma once

#include <stdexcept>
#include <string>

namespace mtf {

/// Base class for every error raised by the library. The module tag is
/// prepended to the message so CLI diagnostics show where a failure began.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error("[" + module + "] " + what), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

/// Bad input: out-of-range parameters, shape mismatches, malformed meshes.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical routine could not deliver a result (singular system,
/// eigensolver non-convergence, quadrature failure).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Configuration problems detected while parsing CLI flags or config files.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("config", what) {}
};

}  // namespace mtf
