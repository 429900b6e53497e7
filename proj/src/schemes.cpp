#include "lamcav/schemes.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "lamcav/errors.hpp"

namespace lamcav {

using std::numbers::pi;
using std::numbers::sqrt2;
using std::numbers::sqrt3;

const char* to_string(SchemeId id) {
  switch (id) {
    case SchemeId::S1: return "S1";
    case SchemeId::S0: return "S0";
    case SchemeId::T0: return "T0";
    case SchemeId::T1: return "T1";
    case SchemeId::T0S0_mix: return "T0S0_mix";
    case SchemeId::WS: return "WS";
  }
  return "?";
}

std::optional<SchemeId> parse_scheme(const std::string& name) {
  static const std::map<std::string, SchemeId> table = {
      {"S1", SchemeId::S1}, {"S0", SchemeId::S0},       {"T0", SchemeId::T0},      {"T1", SchemeId::T1},
      {"T0S0_mix", SchemeId::T0S0_mix}, {"mix", SchemeId::T0S0_mix}, {"WS", SchemeId::WS}};
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

bool needs_confinement(SchemeId id) { return id == SchemeId::S1 || id == SchemeId::S0; }

double ws_b_opt(double W, const SystemParams& p) {
  return sqrt3 * W / std::pow(2.0, 1.25) * std::pow(p.gamma * p.kappa / (p.g * p.g), 0.25);
}

SystemParams preset(SchemeId id, double g, double gamma, double kappa, double Omega, const PresetOptions& opts) {
  SystemParams p;
  p.g = g;
  p.gamma = gamma;
  p.kappa = kappa;
  p.Omega = Omega;
  if (opts.warn_out_of_range && Omega > 0.5 * gamma && id != SchemeId::WS)
    warn(std::string(to_string(id)) + " preset: Omega above gamma/2 leaves the perturbative range");
  switch (id) {
    case SchemeId::S1:
      p.Omega_MW = Omega / std::pow(2.0, 1.25);
      p.beta = p.Omega_MW / sqrt2;
      p.delta = -p.beta;
      p.Delta = 0.0;
      p.phi = pi;
      break;
    case SchemeId::S0:
    case SchemeId::T0:
    case SchemeId::T0S0_mix:
      p.Delta = g * std::sqrt(gamma / kappa);
      p.delta = g * g / p.Delta;
      p.Omega_MW = Omega / opts.mw_divisor;
      p.phi = id == SchemeId::S0 ? pi : 0.0;
      break;
    case SchemeId::T1:
      p.Delta = g * std::sqrt(2.0 * gamma / kappa);
      p.delta = 2.0 * g * g / p.Delta;
      p.Omega_MW = Omega / opts.mw_divisor;
      p.beta = p.Omega_MW / sqrt2;
      break;
    case SchemeId::WS: {
      p.Delta = opts.ws_delta_factor * g * g / kappa;
      if (p.Delta * kappa < 5.0 * g * g) warn("WS preset: Delta kappa is not much larger than g^2");
      p.delta = 0.0;
      p.beta = -Omega * Omega / (4.0 * p.Delta);
      const double kappa_eff = 2.0 * g * g * Omega * Omega / (p.Delta * p.Delta * kappa);
      const double W = opts.ws_mw_fraction * kappa_eff;
      p.Omega_MW = sqrt2 * W;
      p.b = ws_b_opt(W, p);
      break;
    }
  }
  return p;
}

void rates_for_cooperativity(double C, double ratio, double& gamma, double& kappa) {
  if (!(C > 0.0) || !(ratio > 0.0)) throw Error(ErrorCode::InvalidArgument, "C and gamma/kappa must be > 0");
  kappa = std::sqrt(1.0 / (ratio * C));
  gamma = ratio * kappa;
}

double static_error(SchemeId id, double C) {
  if (!(C > 0.0)) throw Error(ErrorCode::InvalidArgument, "cooperativity must be > 0");
  switch (id) {
    case SchemeId::S1: return 1.5 / C;
    case SchemeId::S0: return 3.5 / C;
    case SchemeId::T1: return 4.5 / C;
    case SchemeId::T0: return 5.5 / C;
    case SchemeId::T0S0_mix: return 4.5 / C;
    case SchemeId::WS: return 3.0 / (2.0 * std::sqrt(2.0 * C));
  }
  return 0.0;
}

double gap_analytic(SchemeId id, const SystemParams& p) {
  const double w = p.Omega * p.Omega / p.gamma;
  switch (id) {
    case SchemeId::S1: return w / 12.0;
    case SchemeId::S0: return (5.0 - std::sqrt(5.0)) / 16.0 * w;
    case SchemeId::T0: return (2.0 - sqrt3) / 8.0 * w;
    case SchemeId::T1: return w / 48.0;
    case SchemeId::T0S0_mix: return (9.0 - 2.0 * sqrt3 - std::sqrt(5.0)) / 32.0 * w;
    case SchemeId::WS: return 2.0 * p.g * p.g * p.Omega * p.Omega / (3.0 * p.Delta * p.Delta * p.kappa);
  }
  return 0.0;
}

double gap_S1_dressed(const SystemParams& p) {
  const double g2 = p.gamma * p.gamma;
  const double w2 = p.Omega_MW * p.Omega_MW;
  const double root = std::sqrt(9.0 * g2 * g2 + 84.0 * g2 * w2 + 324.0 * w2 * w2);
  return p.Omega * p.Omega * (5.0 * g2 + 18.0 * w2 - root) / (24.0 * p.gamma * (g2 + 6.0 * w2));
}

double gap_S1_expansion(const SystemParams& p) {
  const double g2 = p.gamma * p.gamma;
  const double w2 = p.Omega_MW * p.Omega_MW;
  return p.Omega * p.Omega / (12.0 * p.gamma) * (g2 + 2.0 * w2) / (g2 + 6.0 * w2);
}

ErrorBreakdown combined_error_S1(const SystemParams& p) {
  ErrorBreakdown e;
  const double g2 = p.g * p.g;
  const double w2 = p.Omega_MW * p.Omega_MW;
  e.static_part = 1.5 * p.gamma * p.kappa / g2;
  e.dressing = 6.0 * p.kappa * w2 / (g2 * p.gamma);
  e.recycling = w2 > 0.0 ? 3.0 * p.kappa * std::pow(p.Omega, 4) / (16.0 * g2 * p.gamma * w2)
                         : (p.Omega > 0.0 ? INFINITY : 0.0);
  e.total = e.static_part + e.dressing + e.recycling;
  return e;
}

double combined_error_S1_optimal(const SystemParams& p) {
  const double x = p.Omega / p.gamma;
  return 1.5 / p.cooperativity() * (1.0 + sqrt2 * x * x);
}

double optimal_mw_S1(double Omega) { return Omega / std::pow(2.0, 1.25); }

namespace {

void time_constants(const SystemParams& p, double& f, double& r) {
  f = 3.0 * p.kappa / (sqrt2 * p.g * p.g * p.gamma);
  r = 12.0 * p.gamma;
}

}  // namespace

double time_error_S1(const SystemParams& p, double Omega, double t) {
  double f = 0.0, r = 0.0;
  time_constants(p, f, r);
  return 1.5 / p.cooperativity() + f * Omega * Omega + 0.75 * std::exp(-Omega * Omega * t / r);
}

OptimalDrive optimal_drive_for_time(double t, const SystemParams& p) {
  OptimalDrive out;
  time_constants(p, out.f, out.r);
  if (!(t > 0.0)) throw Error(ErrorCode::NoValidDrive, "preparation time must be > 0");
  const double arg = 4.0 * out.f * out.r / (3.0 * t);
  if (arg >= 1.0)
    throw Error(ErrorCode::NoValidDrive, "t = " + std::to_string(t) + " too short: log argument " + std::to_string(arg));
  out.Omega = std::sqrt(-(out.r / t) * std::log(arg));
  const double fr = out.f * out.r;
  out.error = 1.5 / p.cooperativity() + fr / t * (1.0 + std::log(sqrt2 * p.g * p.g * t / (48.0 * p.kappa)));
  return out;
}

WSAnalytics ws_analytics(const SystemParams& p) {
  WSAnalytics a;
  if (p.Delta * p.kappa < 5.0 * p.g * p.g) warn("ws_analytics: Delta kappa is not much larger than g^2");
  a.W = p.Omega_MW / sqrt2;
  const double W2 = a.W * a.W;
  const double b2 = p.b * p.b;
  const double g2 = p.g * p.g;
  a.psi_error = b2 > 0.0 ? 3.0 * p.gamma * p.kappa * (4.0 * b2 + 3.0 * W2) * W2 / (64.0 * g2 * (2.0 * b2 + W2) * b2)
                         : INFINITY;
  a.overlap_error = (2.0 * b2 + W2) > 0.0 ? 2.0 * b2 / (2.0 * b2 + W2) : 0.0;
  a.kappa_eff_S = (2.0 * b2 + W2) > 0.0
                      ? 4.0 * b2 * g2 * p.Omega * p.Omega / (p.Delta * p.Delta * p.kappa * (2.0 * b2 + W2))
                      : 0.0;
  a.b_opt = ws_b_opt(a.W, p);
  a.total_error = a.psi_error + a.overlap_error;
  const double gk = p.gamma * p.kappa;
  const double sgk = std::sqrt(gk);
  a.closed_error = 3.0 * gk * (8.0 * p.g + sqrt2 * sgk) / (4.0 * p.g * (3.0 * gk + 4.0 * sqrt2 * p.g * sgk));
  return a;
}

ErrorAndGap mix_error_and_gap_at(const SystemParams& p, double phi) {
  const double C = p.cooperativity();
  const double c2 = std::cos(phi) * std::cos(phi);
  const double s2 = 1.0 - c2;
  return {c2 * static_error(SchemeId::T0, C) + s2 * static_error(SchemeId::S0, C),
          c2 * gap_analytic(SchemeId::T0, p) + s2 * gap_analytic(SchemeId::S0, p)};
}

ErrorAndGap mix_error_and_gap(const SystemParams& p, int phi_points) {
  if (phi_points < 1) throw Error(ErrorCode::InvalidArgument, "phi_points must be >= 1");
  ErrorAndGap acc;
  for (int k = 0; k < phi_points; ++k) {
    const auto v = mix_error_and_gap_at(p, 2.0 * pi * k / phi_points);
    acc.error += v.error;
    acc.gap += v.gap;
  }
  acc.error /= phi_points;
  acc.gap /= phi_points;
  return acc;
}

double asymmetry_error(double alpha) {
  if (std::abs(alpha) > 0.3) warn("asymmetry_error: |alpha| > 0.3 is outside the quadratic regime");
  return 3.0 * alpha * alpha;
}

}  // namespace lamcav
