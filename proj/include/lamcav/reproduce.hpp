#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lamcav/effective.hpp"
#include "lamcav/liouville.hpp"
#include "lamcav/ratemodel.hpp"
#include "lamcav/schemes.hpp"

namespace lamcav {

// Singlet |S> with zero photons, the target state of every scheme.
StateVector singlet(const SpacePtr& space);

struct SteadyRun {
  SystemParams params;
  double fidelity = 0.0;
  double gap = 0.0;
  DensityMatrix rho;
  SteadyStateInfo info;
  SpectrumReport spectrum;
};

// Full Liouvillian steady state, its singlet fidelity and the spectral gap.
SteadyRun steady_full(const SystemParams& p, bool with_gap = true);
// Same quantities from the (optionally dressed) effective ground-state model.
SteadyRun steady_effective(const SystemParams& p, bool dressed, bool with_gap = true);

// Average of the T0 and S0 effective generators: the fast phase-alternation limit.
Liouvillian mix_effective_liouvillian(const SystemParams& t0_params);

struct SchemeSteady {
  SchemeId scheme = SchemeId::S1;
  SystemParams params;
  double fidelity = 0.0;  // mix: average of the two endpoint fidelities
  double gap = 0.0;       // mix: gap of the averaged effective generator
  double analytic_error = 0.0;
  double analytic_gap = 0.0;
  double effective_fidelity = 0.0;
};

SchemeSteady scheme_steady(SchemeId id, double g, double gamma, double kappa, double Omega,
                           const PresetOptions& opts = {});

// One result per (grid point, scheme, method). Failed points keep status != "ok".
struct SweepRow {
  std::string axis;
  double value = 0.0;
  std::string scheme;
  std::string method;
  double fidelity = 0.0;
  double error = 0.0;
  double gap = 0.0;
  std::string status = "ok";
};

struct SweepBase {
  double g = 1.0;
  double gamma = kTableGamma;
  double kappa = kTableKappa;
  double Omega = kTableGamma / 10.0;
  double ratio = 12.0 / 5.0;  // gamma / kappa held fixed in the cooperativity sweep
  PresetOptions preset;
};

std::vector<SweepRow> sweep_cooperativity(const std::vector<SchemeId>& schemes, const std::vector<double>& Cs,
                                          const SweepBase& base = {});
std::vector<SweepRow> sweep_drive(const std::vector<SchemeId>& schemes, const std::vector<double>& Omegas,
                                  const SweepBase& base = {});
// Error after time t at the analytically optimal drive of the S1 scheme.
std::vector<SweepRow> sweep_time(const std::vector<double>& times, const SweepBase& base = {});
std::vector<SweepRow> sweep_asymmetry(const std::vector<SchemeId>& schemes, const std::vector<double>& alphas,
                                      const SweepBase& base = {});

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);
// Least-squares c in y = c x^2.
double quadratic_coefficient(const std::vector<double>& x, const std::vector<double>& y);

struct Table1Options {
  double dynamic_error = 0.02;
  double reference_fraction = 0.01;  // static reference at Omega = gamma * fraction
  double weak_fraction = 0.1;        // max fidelity at Omega = gamma * fraction
  double omega_limit = 16.0;         // bracket expansion stops at omega_limit * g
  double g_over_2pi_MHz = 16.0;
  double convergence_threshold = 0.01;
  PresetOptions preset;
};

struct Table1Row {
  SchemeId scheme = SchemeId::S1;
  double static_error = 0.0;  // closed form
  double max_fidelity = 0.0;
  double gap_at_2pct = 0.0;
  double convergence_time_us = 0.0;
  bool needs_confinement = false;
  double Omega_at_2pct = 0.0;
  double inverse_gap_us = 0.0;
  std::string status = "ok";
};

Table1Row table1_row(SchemeId id, double g = 1.0, double gamma = kTableGamma, double kappa = kTableKappa,
                     const Table1Options& opts = {});
std::vector<Table1Row> table1(double g = 1.0, double gamma = kTableGamma, double kappa = kTableKappa,
                              const Table1Options& opts = {});

enum class Method { Full, Effective, DressedEffective, Rate };
const char* to_string(Method m);
std::optional<Method> parse_method(const std::string& name);

struct PopulationRow {
  std::string method;
  double t = 0.0;
  double P_00 = 0.0;
  double P_T = 0.0;
  double P_11 = 0.0;
  double P_S = 0.0;
  double P_excited_total = 0.0;
  double fidelity = 0.0;
};

struct TrajectoryRequest {
  SystemParams params;
  // "mixed" (identity on the ground sector), "triplet" (00, T, 11), or a named
  // ground state such as "S", "T", "00", "11".
  std::string initial = "mixed";
  double t_final = 0.0;
  int samples = 80;
  std::vector<Method> methods = {Method::Full, Method::Effective, Method::DressedEffective, Method::Rate};
  Integrator integrator = Integrator::Exact;
  double rk4_dt = 0.05;
};

struct TrajectoryFailure {
  std::string method;
  std::string message;
};

struct TrajectoryResult {
  std::vector<PopulationRow> rows;
  std::vector<TrajectoryFailure> failures;
  double max_trace_drift = 0.0;
  double min_eigenvalue = 0.0;
};

DensityMatrix initial_state(const SpacePtr& space, const std::string& spec);
TrajectoryResult run_trajectories(const TrajectoryRequest& req);
// Largest |P_S(a, t) - P_S(b, t)| over shared sample times.
double max_singlet_deviation(const TrajectoryResult& r, const std::string& a, const std::string& b);

// Singlet fidelity after evolving I_g/4 for time t with the full S1 model at drive Omega.
double timed_fidelity_S1(double Omega, double t, const SweepBase& base = {},
                         Integrator integrator = Integrator::Exact, double rk4_dt = 0.05);

}  // namespace lamcav
