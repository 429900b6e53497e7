#pragma once

#include <string>
#include <vector>

#include "lamcav/hilbert.hpp"

namespace lamcav {

// Rates in units of g unless stated otherwise.
struct SystemParams {
  double g = 1.0;
  double gamma = 0.375;
  double kappa = 0.15625;
  double Omega = 0.0375;
  double Omega_MW = 0.0;
  double Delta = 0.0;
  double delta = 0.0;
  double beta = 0.0;
  double phi = 0.0;
  double alpha = 0.0;
  double b = 0.0;
  int n_max = 1;

  double cooperativity() const { return g * g / (gamma * kappa); }
  // Throws InvalidArgument when a field is outside its physical domain.
  void validate() const;
  bool operator==(const SystemParams&) const = default;
};

struct LabeledOperator {
  std::string label;
  OperatorMatrix op;
};

struct MasterEquation {
  OperatorMatrix H;
  std::vector<LabeledOperator> lindblads;

  const SpacePtr& space() const { return H.space; }
};

// Ground space used throughout: photon cutoff from params, at most one excitation.
SpacePtr default_space(const SystemParams& p);

OperatorMatrix build_Hg(const SystemParams& p, const SpacePtr& space);
OperatorMatrix build_He(const SystemParams& p, const SpacePtr& space);
// Atom-cavity exchange part of H_e alone.
OperatorMatrix build_Hac(const SystemParams& p, const SpacePtr& space);

struct DriveOperators {
  OperatorMatrix V_plus;
  OperatorMatrix V_minus;
};
DriveOperators build_V(const SystemParams& p, const SpacePtr& space);

// Order: kappa, gamma0_1, gamma0_2, gamma1_1, gamma1_2.
std::vector<LabeledOperator> build_lindblads(const SystemParams& p, const SpacePtr& space);

MasterEquation build_master_equation(const SystemParams& p, const SpacePtr& space);
inline MasterEquation build_master_equation(const SystemParams& p) {
  return build_master_equation(p, default_space(p));
}

}  // namespace lamcav
