#pragma once

#include <array>
#include <optional>
#include <string>

#include "lamcav/model.hpp"

namespace lamcav {

enum class SchemeId { S1, S0, T0, T1, T0S0_mix, WS };

inline constexpr std::array<SchemeId, 6> kAllSchemes = {SchemeId::S1, SchemeId::S0, SchemeId::T1,
                                                        SchemeId::T0, SchemeId::T0S0_mix, SchemeId::WS};

const char* to_string(SchemeId id);
std::optional<SchemeId> parse_scheme(const std::string& name);
bool needs_confinement(SchemeId id);

struct PresetOptions {
  // Omega_MW = Omega / divisor for T0, S0 and T1; the usable interval is [2, 3].
  double mw_divisor = 3.0;
  // WS: Delta = ws_delta_factor * g^2 / kappa.
  double ws_delta_factor = 10.0;
  // WS: triplet-basis microwave coupling as a multiple of kappa_eff.
  double ws_mw_fraction = 1.0;
  bool warn_out_of_range = true;
};

// T0S0_mix returns the T0 parameters; the phi = pi endpoint is the S0 preset.
SystemParams preset(SchemeId id, double g, double gamma, double kappa, double Omega,
                    const PresetOptions& opts = {});

// Table-1 cavity: (g, gamma, kappa) = (1, 3/8, 5/32) in units of g.
inline constexpr double kTableGamma = 0.375;
inline constexpr double kTableKappa = 0.15625;

// Rates with g = 1 and gamma/kappa = ratio giving cooperativity C.
void rates_for_cooperativity(double C, double ratio, double& gamma, double& kappa);

double static_error(SchemeId id, double C);

// Closed-form gap for the preset regime; S1 returns the weak-driving form.
double gap_analytic(SchemeId id, const SystemParams& p);
double gap_S1_dressed(const SystemParams& p);
double gap_S1_expansion(const SystemParams& p);

struct ErrorBreakdown {
  double static_part = 0.0;
  double dressing = 0.0;
  double recycling = 0.0;
  double total = 0.0;
};

ErrorBreakdown combined_error_S1(const SystemParams& p);
// (3/2C)(1 + sqrt2 (Omega/gamma)^2)
double combined_error_S1_optimal(const SystemParams& p);
double optimal_mw_S1(double Omega);

struct OptimalDrive {
  double Omega = 0.0;
  double error = 0.0;
  double f = 0.0;
  double r = 0.0;
};

// Error model 3/2C + f Omega^2 + (3/4) exp(-Omega^2 t / r).
double time_error_S1(const SystemParams& p, double Omega, double t);
OptimalDrive optimal_drive_for_time(double t, const SystemParams& p);

struct WSAnalytics {
  double W = 0.0;              // triplet-basis microwave coupling
  double psi_error = 0.0;      // 1 - F_psiS
  double overlap_error = 0.0;  // preset compromise from the asymmetry b
  double kappa_eff_S = 0.0;
  double b_opt = 0.0;
  double total_error = 0.0;
  double closed_error = 0.0;   // fully inserted expression at b_opt
};

WSAnalytics ws_analytics(const SystemParams& p);
double ws_b_opt(double W, const SystemParams& p);

struct ErrorAndGap {
  double error = 0.0;
  double gap = 0.0;
};

// cos^2 / sin^2 weighting of the T0 and S0 values at a fixed phase.
ErrorAndGap mix_error_and_gap_at(const SystemParams& p, double phi);
// Uniform average over phi.
ErrorAndGap mix_error_and_gap(const SystemParams& p, int phi_points = 720);

double asymmetry_error(double alpha);

}  // namespace lamcav
