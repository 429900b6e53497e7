#pragma once

#include <array>
#include <string>
#include <vector>

#include "lamcav/liouville.hpp"
#include "lamcav/model.hpp"

namespace lamcav {

// Ground sector: zero photons, no atom in e. Everything else is eliminated.
struct PartitionedModel {
  SystemParams params;
  SpacePtr space;
  SpacePtr ground;
  std::vector<int> ground_idx;
  std::vector<int> excited_idx;
  OperatorMatrix ground_projector;
  OperatorMatrix excited_projector;
  OperatorMatrix H_g;  // full-space operators
  OperatorMatrix H_e;
  OperatorMatrix V_plus;
  OperatorMatrix V_minus;
  std::vector<LabeledOperator> lindblads;

  MatC ground_block(const MatC& m) const;   // P_g m P_g
  MatC excited_block(const MatC& m) const;  // P_e m P_e
  MatC excited_to_ground(const MatC& m) const;
  MatC ground_to_excited(const MatC& m) const;
};

PartitionedModel partition(const SystemParams& p, const SpacePtr& space);
inline PartitionedModel partition(const SystemParams& p) { return partition(p, default_space(p)); }

// H_NH on the excited sector (rows/cols follow pm.excited_idx). The excited
// block keeps every term of H_g + H_e that acts there, including the beta shifts.
MatC build_HNH(const PartitionedModel& pm);

struct ComplexDetunings {
  // index n = 0, 1, 2; Delta_tilde[n] = Delta + n beta - i gamma/2
  std::array<cplx, 3> Delta_tilde{};
  std::array<cplx, 3> delta_tilde{};
  std::array<cplx, 3> Delta_eff{};
  std::array<cplx, 3> delta_eff{};
  std::array<cplx, 3> g_eff{};  // g_eff[0] is undefined and left at zero
  std::array<cplx, 3> D{};      // D[n] = n g^2 - delta_tilde[n] Delta_tilde[n-1]

  // Delta_tilde with the convention Delta_{-1} = Delta_1.
  cplx Delta_tilde_at(int n) const { return Delta_tilde[static_cast<size_t>(n < 0 ? 1 : n)]; }
};

ComplexDetunings closed_form_propagators(const SystemParams& p);

// Excited-sector inverse assembled block by block from the closed forms. Requires
// alpha = 0, Omega_MW = 0, b = 0 and the single-excitation space with n_max = 1.
MatC closed_form_inverse(const PartitionedModel& pm);

MatC invert_HNH(const MatC& hnh);

struct EffectiveModel {
  SpacePtr ground;
  MatC H_eff;
  std::vector<std::string> labels;
  std::vector<MatC> L_eff;
  bool dressed = false;
  std::vector<double> ground_energies;
  MatC ground_modes;  // columns: eigenvectors of the ground block of H_g

  MasterEquation master_equation() const;
  Liouvillian liouvillian(Exec exec = Exec::Parallel) const;
};

EffectiveModel reduce(const PartitionedModel& pm);

enum class Retention { Full, Selective };

// Shifted propagators (H_NH - E_l)^-1 for each ground mode l. With Selective,
// only the near-resonant eigenmodes of H_NH (|lambda| <= 3 min |lambda|) feel E_l.
EffectiveModel reduce_dressed(const PartitionedModel& pm, const std::vector<double>& energies,
                              const MatC& modes, Retention retention = Retention::Full);
EffectiveModel reduce_dressed(const PartitionedModel& pm, Retention retention = Retention::Full);

struct ShufflingRates {
  double gamma_eff = 0.0;
  double kappa_eff = 0.0;
  double gamma_d = 0.0;
  cplx chi_a = 0.0;
  double gamma_a = 0.0;
};

ShufflingRates shuffling_rates(const SystemParams& p);

// Closed-form dressed operators of the S1 scheme in the bare ground basis.
EffectiveModel dressed_shuffling_operators(const SystemParams& p, const SpacePtr& ground);

// Ground-sector vector of a named ground state.
VecC ground_vector(const SpacePtr& ground, NamedState name);

}  // namespace lamcav
