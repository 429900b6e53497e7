#pragma once

#include <random>
#include <string>
#include <vector>

#include "lamcav/errors.hpp"
#include "lamcav/hilbert.hpp"

namespace testing {

inline lamcav::MatC random_matrix(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  lamcav::MatC m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = {n(rng), n(rng)};
  return m;
}

inline lamcav::MatC random_hermitian(int d, std::mt19937_64& rng) {
  const lamcav::MatC a = random_matrix(d, rng);
  return 0.5 * (a + a.adjoint());
}

inline lamcav::MatC random_density(int d, std::mt19937_64& rng) {
  const lamcav::MatC a = random_matrix(d, rng);
  lamcav::MatC rho = a * a.adjoint();
  return rho / rho.trace();
}

// Collects warnings for the lifetime of the object.
class WarningCapture {
 public:
  WarningCapture() {
    old_ = lamcav::set_warning_handler([this](const std::string& m) { messages.push_back(m); });
  }
  ~WarningCapture() { lamcav::set_warning_handler(old_); }
  std::vector<std::string> messages;

 private:
  lamcav::WarningHandler old_;
};

}  // namespace testing
