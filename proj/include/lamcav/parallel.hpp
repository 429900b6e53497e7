#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lamcav/errors.hpp"

namespace lamcav {

// Worker count: LE_THREADS when set to a positive integer, else the OpenMP default.
int worker_count();

struct PointFailure {
  std::size_t index = 0;
  ErrorCode code = ErrorCode::InvalidArgument;
  std::string message;
};

// Runs body(i) for i in [0, n) across worker_count() threads. Exceptions are
// captured per point and never abort the loop.
std::vector<PointFailure> parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace lamcav
