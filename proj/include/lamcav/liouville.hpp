#pragma once

#include <vector>

#include "lamcav/model.hpp"

namespace lamcav {

enum class Exec { Serial, Parallel };

// Column-stacking superoperator acting on vec(rho) (column-major vec).
struct Liouvillian {
  SpacePtr space;
  MatC m;
};

struct DensityMatrix {
  SpacePtr space;
  MatC m;
};

struct SpectrumReport {
  std::vector<cplx> eigenvalues;  // sorted by |Re| ascending
  double gap = 0.0;
  int steady_dim = 0;
  double degeneracy_tol = 0.0;
};

namespace kernels {

// L = I (x) K + conj-block + sum_k conj(L_k) (x) L_k with K = -iH - 1/2 sum L^dag L.
MatC assemble_serial(const MatC& H, const std::vector<MatC>& jumps);
MatC assemble_parallel(const MatC& H, const std::vector<MatC>& jumps);

void apply_serial(const MatC& L, const VecC& x, VecC& y);
void apply_parallel(const MatC& L, const VecC& x, VecC& y);

}  // namespace kernels

VecC vectorize_state(const MatC& rho);
MatC unvectorize_state(const VecC& v, int dim);

Liouvillian vectorize(const MasterEquation& me, Exec exec = Exec::Parallel);
Liouvillian vectorize(const MatC& H, const std::vector<MatC>& jumps, const SpacePtr& space,
                      Exec exec = Exec::Parallel);

// Direct evaluation of -i[H, rho] + sum D[L](rho), used as an oracle for vectorize().
MatC apply_generator(const MasterEquation& me, const MatC& rho);

struct SteadyStateOptions {
  // Singular values <= rel_cutoff * sigma_max count as null. Negative selects the
  // rank tolerance max(rows, cols) * eps.
  double rel_cutoff = -1.0;
  double positivity_tol = 1e-6;
};

struct SteadyStateInfo {
  int steady_dim = 0;
  double sigma_max = 0.0;
  double sigma_null = 0.0;      // largest singular value treated as null
  double sigma_next = 0.0;      // smallest singular value kept
  double residual = 0.0;        // || L vec(rho) ||_2
  double min_eigenvalue = 0.0;
};

DensityMatrix steady_state(const Liouvillian& L, const SteadyStateOptions& opts = {},
                           SteadyStateInfo* info = nullptr);

// rel_tol multiplies max |Re lambda| to give the degeneracy tolerance.
SpectrumReport spectral_gap(const Liouvillian& L, double rel_tol = 1e-9);

struct TrajectoryPoint {
  double t = 0.0;
  DensityMatrix rho;
};

enum class Integrator { RK4, Exact };

struct PropagateOptions {
  Integrator integrator = Integrator::RK4;
  int sample_every = 1;          // RK4 steps between stored samples
  int max_halvings = 8;
  double drift_tol = 1e-8;       // trace drift that triggers step halving
  double fail_tol = 1e-6;        // trace drift still tolerated after the last halving
  Exec exec = Exec::Serial;
};

struct PropagateStats {
  double dt_used = 0.0;
  int halvings = 0;
  double max_trace_drift = 0.0;
  long steps = 0;
};

// RK4 uses fixed steps of dt (shortened so that an integer count reaches t_final).
// The exact integrator steps with exp(L dt). Samples include t = 0 and t_final.
std::vector<TrajectoryPoint> propagate(const DensityMatrix& rho0, const Liouvillian& L, double t_final, double dt,
                                       const PropagateOptions& opts = {}, PropagateStats* stats = nullptr);
std::vector<TrajectoryPoint> propagate(const DensityMatrix& rho0, const MasterEquation& me, double t_final,
                                       double dt, const PropagateOptions& opts = {},
                                       PropagateStats* stats = nullptr);

// exp(L t) vec(rho0).
DensityMatrix evolve_exact(const DensityMatrix& rho0, const Liouvillian& L, double t);

double fidelity(const DensityMatrix& rho, const StateVector& psi);
double trace_norm(const MatC& hermitian);
double min_eigenvalue(const DensityMatrix& rho);
double residual_norm(const Liouvillian& L, const DensityMatrix& rho);

DensityMatrix pure_state(const StateVector& psi);
// Equal-weight mixture of the given pure states.
DensityMatrix mixture(const std::vector<StateVector>& states);
// Identity on the ground sector divided by its dimension.
DensityMatrix mixed_ground_state(const SpacePtr& space);

struct ConvergenceResult {
  double time = 0.0;       // first t with ||rho(t) - rho_ss||_tr <= threshold
  double inverse_gap = 0.0;
};

ConvergenceResult convergence_time(const Liouvillian& L, const DensityMatrix& rho0, const DensityMatrix& rho_ss,
                                   double gap, double threshold = 0.01);

}  // namespace lamcav
