#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace fracsim {

enum class ErrorKind {
  InvalidParameter,
  DegenerateExponent,
  GammaPole,
  OutOfRange,
  CalibrationFailed,
  NoVSS,
  SignViolation,
  OutOfTemporalDomain,
  DegenerateMap,
  NegativeValue,
  NonFiniteInput,
  UnknownModel,
  QuadratureNonConvergent,
  NoConvergence,
  Instability,
  WindowTooNoisy,
};

const char* to_string(ErrorKind kind);

// Every library failure carries a machine-readable kind and optional details
// so the CLI can serialize it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::map<std::string, double> details = {})
      : std::runtime_error(message), kind_(kind), details_(std::move(details)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::map<std::string, double>& details() const noexcept { return details_; }

 private:
  ErrorKind kind_;
  std::map<std::string, double> details_;
};

}  // namespace fracsim
