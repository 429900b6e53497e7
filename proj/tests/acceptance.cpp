// Acceptance suite. One line per criterion; exit status 1 if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "lamcav/effective.hpp"
#include "lamcav/errors.hpp"
#include "lamcav/parallel.hpp"
#include "lamcav/reproduce.hpp"

using namespace lamcav;

namespace {

constexpr double kGamma = kTableGamma;
constexpr double kKappa = kTableKappa;

// Structural quantities gathered by the other criteria and checked in criterion 9.
struct Structural {
  double max_trace_drift = 0.0;
  double max_residual = 0.0;
  double min_eigenvalue = 0.0;
  int trajectories = 0;
  int steady_states = 0;

  void add(const SteadyRun& r) {
    max_residual = std::max(max_residual, r.info.residual);
    min_eigenvalue = std::min(min_eigenvalue, r.info.min_eigenvalue);
    ++steady_states;
  }
  void add(const TrajectoryResult& r) {
    max_trace_drift = std::max(max_trace_drift, r.max_trace_drift);
    min_eigenvalue = std::min(min_eigenvalue, r.min_eigenvalue);
    ++trajectories;
  }
};

Structural g_structural;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome criterion_table1_fidelities() {
  struct Ref {
    SchemeId id;
    double F;
  };
  const Ref refs[] = {{SchemeId::S1, 0.925}, {SchemeId::S0, 0.842}, {SchemeId::T1, 0.811},
                      {SchemeId::T0, 0.772}, {SchemeId::T0S0_mix, 0.797}, {SchemeId::WS, 0.773}};
  Outcome o{true, ""};
  for (const auto& r : refs) {
    const double Om = kGamma / 10.0;
    const auto s = scheme_steady(r.id, 1.0, kGamma, kKappa, Om);
    if (r.id != SchemeId::T0S0_mix) g_structural.add(steady_full(preset(r.id, 1.0, kGamma, kKappa, Om), false));
    const bool ok = std::abs(s.fidelity - r.F) <= 0.015;
    o.pass = o.pass && ok;
    o.detail += std::string(to_string(r.id)) + " " + fmt("%.4f", s.fidelity) + (ok ? "" : "!") + " ";
  }
  return o;
}

Outcome criterion_static_scaling() {
  std::vector<double> Cs;
  for (int i = 0; i < 25; ++i) Cs.push_back(10.0 * std::pow(100.0, i / 24.0));
  const std::vector<SchemeId> ids = {SchemeId::S1, SchemeId::S0, SchemeId::T1, SchemeId::T0, SchemeId::WS};
  const auto rows = sweep_cooperativity(ids, Cs);
  Outcome o{true, ""};
  for (SchemeId id : ids) {
    std::vector<double> x, y;
    double worst_prefactor = 0.0;
    for (const auto& r : rows) {
      if (r.scheme != to_string(id) || r.method != "full") continue;
      if (r.status != "ok") {
        o.pass = false;
        o.detail += std::string(to_string(id)) + " point failed ";
        continue;
      }
      x.push_back(r.value);
      y.push_back(r.error);
      if (id != SchemeId::WS && r.value >= 100.0) {
        const double ref = static_error(id, 1.0);
        worst_prefactor = std::max(worst_prefactor, std::abs(r.error * r.value / ref - 1.0));
      }
    }
    const double slope = loglog_slope(x, y);
    const double want = id == SchemeId::WS ? -0.5 : -1.0;
    const bool ok = std::abs(slope - want) <= 0.1 && worst_prefactor <= 0.15;
    o.pass = o.pass && ok;
    o.detail += std::string(to_string(id)) + " slope " + fmt("%.3f", slope);
    if (id != SchemeId::WS) o.detail += " pref dev " + fmt("%.3f", worst_prefactor);
    o.detail += ok ? "; " : "!; ";
  }
  return o;
}

Outcome criterion_gap() {
  Outcome o{true, ""};
  const double Om = kGamma / 10.0;
  const auto weak = steady_full(preset(SchemeId::S1, 1.0, kGamma, kKappa, Om), true);
  g_structural.add(weak);
  const double ratio = weak.gap / (Om * Om / (12.0 * kGamma));
  const bool weak_ok = std::abs(ratio - 1.0) <= 0.15;
  o.detail = "weak numeric/(Om^2/12gamma) " + fmt("%.3f", ratio) + (weak_ok ? "" : "!");
  double worst = 0.0, worst_at = 0.0;
  for (int i = 0; i <= 8; ++i) {
    const double frac = 0.1 + 0.4 * i / 8.0;
    PresetOptions popts;
    popts.warn_out_of_range = false;
    const auto p = preset(SchemeId::S1, 1.0, kGamma, kKappa, frac * kGamma, popts);
    const double num = steady_full(p, true).gap;
    const double dev = std::abs(gap_S1_dressed(p) / num - 1.0);
    if (dev > worst) {
      worst = dev;
      worst_at = frac;
    }
  }
  const bool dressed_ok = worst <= 0.15;
  o.detail += "; dressed closed form max dev " + fmt("%.3f", worst) + " at Omega = " + fmt("%.2f", worst_at) +
              " gamma" + (dressed_ok ? "" : "!");
  o.pass = weak_ok && dressed_ok;
  return o;
}

Outcome criterion_combined_error() {
  Outcome o{true, ""};
  const double C = 1.0 / (kGamma * kKappa);
  double worst = 0.0;
  for (int i = 0; i <= 8; ++i) {
    const double frac = 0.1 + 0.4 * i / 8.0;
    PresetOptions popts;
    popts.warn_out_of_range = false;
    const auto p = preset(SchemeId::S1, 1.0, kGamma, kKappa, frac * kGamma, popts);
    const auto r = steady_full(p, false);
    g_structural.add(r);
    const double analytic = 1.5 / C * (1.0 + std::numbers::sqrt2 * frac * frac);
    worst = std::max(worst, std::abs((1.0 - r.fidelity) - analytic));
  }
  o.pass = worst <= 0.02;
  o.detail = "max |numeric - analytic| " + fmt("%.4f", worst);
  return o;
}

Outcome criterion_optimal_time() {
  Outcome o{true, ""};
  const double t = 1000.0;
  const SweepBase base;
  const auto ref = preset(SchemeId::S1, 1.0, kGamma, kKappa, kGamma / 10.0);
  const auto opt = optimal_drive_for_time(t, ref);
  const double F_rk4 = timed_fidelity_S1(opt.Omega, t, base, Integrator::RK4, 0.1);
  auto F_exact = [&](double Om) { return timed_fidelity_S1(Om, t, base); };
  double best = 0.0, best_F = -1.0;
  for (int i = 0; i <= 26; ++i) {
    const double Om = opt.Omega * (0.5 + 1.3 * i / 26.0);
    const double F = F_exact(Om);
    if (F > best_F) {
      best_F = F;
      best = Om;
    }
  }
  const double step = opt.Omega * 1.3 / 26.0;
  const auto [Om_emp, negF] =
      boost::math::tools::brent_find_minima([&](double Om) { return -F_exact(Om); }, best - step, best + step, 40);
  const double rel = opt.Omega / Om_emp - 1.0;
  o.pass = F_rk4 > 0.90 && std::abs(rel) <= 0.10;
  o.detail = "Omega_opt " + fmt("%.5f", opt.Omega) + " F(RK4) " + fmt("%.4f", F_rk4) + ", empirical optimum " +
             fmt("%.5f", Om_emp) + " (F " + fmt("%.4f", -negF) + "), Omega_opt/empirical - 1 = " + fmt("%+.3f", rel);
  return o;
}

Outcome criterion_effective_oracle() {
  Outcome o{true, ""};
  std::mt19937_64 rng(20260501);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int done = 0, rejected = 0;
  while (done < 100) {
    SystemParams p;
    p.g = 0.5 + 1.5 * u(rng);
    p.gamma = 0.05 + u(rng);
    p.kappa = 0.05 + u(rng);
    p.Omega = 0.01 + 0.2 * u(rng);
    p.Delta = -2.0 + 4.0 * u(rng);
    p.delta = -2.0 + 4.0 * u(rng);
    p.beta = -0.5 + u(rng);
    p.phi = 2.0 * std::numbers::pi * u(rng);
    try {
      const auto pm = partition(p);
      const MatC numeric = invert_HNH(build_HNH(pm));
      const MatC closed = closed_form_inverse(pm);
      worst = std::max(worst, (numeric - closed).norm() / numeric.norm());
      ++done;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularPropagator) throw;
      ++rejected;
    }
  }
  const auto p = preset(SchemeId::S1, 1.0, kGamma, kKappa, kGamma / 10.0);
  const auto em = reduce(partition(p));
  const VecC T = ground_vector(em.ground, NamedState::T);
  const VecC S = ground_vector(em.ground, NamedState::S);
  const VecC e11 = ground_vector(em.ground, NamedState::G11);
  const double ge = std::norm(S.dot(em.L_eff[1] * T)) / (p.Omega * p.Omega / (8.0 * p.gamma));
  const double ke = std::norm(e11.dot(em.L_eff[0] * S)) / (p.kappa * p.Omega * p.Omega / (8.0 * p.g * p.g));
  o.pass = worst <= 1e-10 && std::abs(ge - 1.0) <= 0.05 && std::abs(ke - 1.0) <= 0.05;
  o.detail = "max rel diff " + fmt("%.2e", worst) + " over 100 sets (" + std::to_string(rejected) +
             " singular draws skipped); gamma_eff ratio " + fmt("%.4f", ge) + ", kappa_eff ratio " + fmt("%.4f", ke);
  return o;
}

Outcome criterion_trajectories() {
  Outcome o{true, ""};
  TrajectoryRequest weak;
  weak.params = preset(SchemeId::S1, 1.0, kGamma, kKappa, kGamma / 10.0);
  weak.t_final = 8.0 / gap_analytic(SchemeId::S1, weak.params);
  weak.methods = {Method::Full, Method::Effective, Method::Rate};
  const auto rw = run_trajectories(weak);
  g_structural.add(rw);
  PresetOptions popts;
  popts.warn_out_of_range = false;
  TrajectoryRequest strong;
  strong.params = preset(SchemeId::S1, 1.0, kGamma, kKappa, kGamma / 2.0, popts);
  strong.t_final = 8.0 / gap_S1_dressed(strong.params);
  strong.methods = {Method::Full, Method::DressedEffective, Method::Effective};
  const auto rs = run_trajectories(strong);
  g_structural.add(rs);
  if (!rw.failures.empty() || !rs.failures.empty()) return {false, "a trajectory method failed"};
  const double fe = max_singlet_deviation(rw, "full", "effective");
  const double fr = max_singlet_deviation(rw, "full", "rate");
  const double er = max_singlet_deviation(rw, "effective", "rate");
  const double fd = max_singlet_deviation(rs, "full", "dressed_effective");
  const double fp = max_singlet_deviation(rs, "full", "effective");
  o.pass = fe <= 0.02 && fr <= 0.02 && er <= 0.02 && fd <= 0.03;
  o.detail = "weak: full-eff " + fmt("%.4f", fe) + " full-rate " + fmt("%.4f", fr) + " eff-rate " + fmt("%.4f", er) +
             "; gamma/2: full-dressed " + fmt("%.4f", fd) + " (plain effective " + fmt("%.4f", fp) + ")";
  return o;
}

Outcome criterion_asymmetry() {
  Outcome o{true, ""};
  std::vector<double> alphas;
  for (int i = 0; i <= 6; ++i) alphas.push_back(0.025 * i);
  alphas.push_back(0.1);
  std::sort(alphas.begin(), alphas.end());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
  const auto rows = sweep_asymmetry({SchemeId::S1}, alphas);
  double F0 = 0.0;
  std::vector<double> x, loss;
  for (const auto& r : rows)
    if (r.method == "full" && r.value == 0.0) F0 = r.fidelity;
  double loss01 = 0.0;
  for (const auto& r : rows) {
    if (r.method != "full") continue;
    if (r.status != "ok") return {false, "asymmetry point failed"};
    x.push_back(r.value);
    loss.push_back(F0 - r.fidelity);
    if (std::abs(r.value - 0.1) < 1e-12) loss01 = F0 - r.fidelity;
  }
  const double c = quadratic_coefficient(x, loss);
  const bool range_ok = loss01 >= 0.015 && loss01 <= 0.035;
  const bool coef_ok = std::abs(c - 3.0) <= 0.5;
  o.pass = range_ok && coef_ok;
  o.detail = "loss at alpha = 0.1 " + fmt("%.4f", loss01) + (range_ok ? "" : "!") + ", fitted coefficient " +
             fmt("%.3f", c) + (coef_ok ? "" : "!");
  return o;
}

Outcome criterion_structural() {
  Outcome o{true, ""};
  auto dark_norm = [](double alpha) {
    SystemParams p = preset(SchemeId::S1, 1.0, kGamma, kKappa, kGamma / 10.0);
    p.alpha = alpha;
    const auto space = default_space(p);
    const auto Hac = build_Hac(p, space);
    return (Hac.m * named_state(space, NamedState::S1).v).norm();
  };
  const double d0 = dark_norm(0.0), d1 = dark_norm(0.1);
  const auto& s = g_structural;
  o.pass = s.max_trace_drift <= 1e-8 && s.max_residual <= 1e-9 && s.min_eigenvalue >= -1e-6 && d0 == 0.0 &&
           d1 > 1e-3;
  o.detail = "trace drift " + fmt("%.1e", s.max_trace_drift) + " over " + std::to_string(s.trajectories) +
             " trajectory sets, residual " + fmt("%.1e", s.max_residual) + " over " +
             std::to_string(s.steady_states) + " steady states, min eigenvalue " + fmt("%.1e", s.min_eigenvalue) +
             ", |H_ac S1| " + fmt("%.1e", d0) + " at alpha 0 and " + fmt("%.1e", d1) + " at alpha 0.1";
  return o;
}

}  // namespace

int main() {
  set_warning_handler([](const std::string&) {});
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"1 Table-1 fidelities at weak driving", criterion_table1_fidelities},
      {"2 static-error scaling with cooperativity", criterion_static_scaling},
      {"3 spectral gap vs closed forms", criterion_gap},
      {"4 combined driving error", criterion_combined_error},
      {"5 optimal-time protocol", criterion_optimal_time},
      {"6 effective-operator oracle", criterion_effective_oracle},
      {"7 multi-method trajectories", criterion_trajectories},
      {"8 asymmetric coupling", criterion_asymmetry},
      {"9 structural properties", criterion_structural},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %s (%s) [%.1fs]\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
