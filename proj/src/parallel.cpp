#include "lamcav/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <mutex>

#include <omp.h>

namespace lamcav {

int worker_count() {
  if (const char* env = std::getenv("LE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    warn(std::string("ignoring LE_THREADS=") + env);
  }
  return std::max(1, omp_get_max_threads());
}

std::vector<PointFailure> parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  std::vector<PointFailure> failures;
  std::mutex mu;
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(worker_count())
  for (long i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      body(idx);
    } catch (const Error& e) {
      std::lock_guard<std::mutex> lock(mu);
      failures.push_back({idx, e.code(), e.what()});
    } catch (const std::exception& e) {
      std::lock_guard<std::mutex> lock(mu);
      failures.push_back({idx, ErrorCode::NumericalInstability, e.what()});
    }
  }
  std::sort(failures.begin(), failures.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
  return failures;
}

}  // namespace lamcav
