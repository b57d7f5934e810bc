#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nonbloch {

enum class ErrorKind {
  NonConvergence,
  DegenerateAllZero,
  EmptyCurve,
  BadSize,
  EigNonConvergence,
  ZeroVector,
  NotOneSided,
  ZeroForce,
  AtExceptionalPoint,
  Instability,
  EdgeContamination,
  BadInput,
};

std::string_view to_string(ErrorKind kind);

// True for kinds that indicate a mis-specified request rather than a
// numerical breakdown. The CLI maps these to exit code 2.
bool is_configuration_error(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised by the config and model-file parsers; names the offending key or line.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nonbloch
