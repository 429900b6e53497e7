#include "lamcav/errors.hpp"

#include <iostream>
#include <mutex>

namespace lamcav {

namespace {

std::mutex& handler_mutex() {
  static std::mutex m;
  return m;
}

WarningHandler& handler_slot() {
  static WarningHandler h = [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };
  return h;
}

}  // namespace

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::DegenerateSteadyState: return "degenerate-steady-state";
    case ErrorCode::NumericalInstability: return "numerical-instability";
    case ErrorCode::SingularPropagator: return "singular-propagator";
    case ErrorCode::StepSize: return "step-size";
    case ErrorCode::NoValidDrive: return "no-valid-drive";
    case ErrorCode::DegenerateBasis: return "degenerate-basis";
    case ErrorCode::DivergentRecycling: return "divergent-recycling";
    case ErrorCode::Eigensolver: return "eigensolver";
    case ErrorCode::NoBracket: return "no-bracket";
    case ErrorCode::Parse: return "parse";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message, long detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(detail) {}

WarningHandler set_warning_handler(WarningHandler handler) {
  std::lock_guard<std::mutex> lock(handler_mutex());
  WarningHandler old = handler_slot();
  handler_slot() = std::move(handler);
  return old;
}

void warn(const std::string& message) {
  std::lock_guard<std::mutex> lock(handler_mutex());
  if (handler_slot()) handler_slot()(message);
}

}  // namespace lamcav
