#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace lamcav {

enum class ErrorCode {
  InvalidArgument,
  DegenerateSteadyState,
  NumericalInstability,
  SingularPropagator,
  StepSize,
  NoValidDrive,
  DegenerateBasis,
  DivergentRecycling,
  Eigensolver,
  NoBracket,
  Parse,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, long detail = -1);

  ErrorCode code() const { return code_; }
  // steady_dim for DegenerateSteadyState, block index for SingularPropagator
  long detail() const { return detail_; }

 private:
  ErrorCode code_;
  long detail_;
};

using WarningHandler = std::function<void(const std::string&)>;

// Installs a new handler and returns the previous one. The default prints to stderr.
WarningHandler set_warning_handler(WarningHandler handler);
void warn(const std::string& message);

}  // namespace lamcav
