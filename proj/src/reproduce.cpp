#include "lamcav/reproduce.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/tools/roots.hpp>

#include "lamcav/errors.hpp"
#include "lamcav/parallel.hpp"

namespace lamcav {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double cooperativity(double g, double gamma, double kappa) { return g * g / (gamma * kappa); }

double analytic_error(SchemeId id, const SystemParams& p) {
  switch (id) {
    case SchemeId::S1: return combined_error_S1(p).total;
    case SchemeId::WS: return ws_analytics(p).total_error;
    default: return static_error(id, p.cooperativity());
  }
}

SystemParams with_phi(SystemParams p, double phi) {
  p.phi = phi;
  return p;
}

std::string status_of(const Error& e) { return std::string("error:") + to_string(e.code()); }

}  // namespace

StateVector singlet(const SpacePtr& space) { return named_state(space, NamedState::S); }

SteadyRun steady_full(const SystemParams& p, bool with_gap) {
  const auto space = default_space(p);
  const auto L = vectorize(build_master_equation(p, space));
  SteadyRun out;
  out.params = p;
  out.rho = steady_state(L, {}, &out.info);
  out.fidelity = fidelity(out.rho, singlet(space));
  if (with_gap) {
    out.spectrum = spectral_gap(L);
    out.gap = out.spectrum.gap;
  }
  return out;
}

SteadyRun steady_effective(const SystemParams& p, bool dressed, bool with_gap) {
  const auto pm = partition(p);
  const EffectiveModel em = dressed ? reduce_dressed(pm) : reduce(pm);
  const auto L = em.liouvillian();
  SteadyRun out;
  out.params = p;
  out.rho = steady_state(L, {}, &out.info);
  out.fidelity = fidelity(out.rho, singlet(em.ground));
  if (with_gap) {
    out.spectrum = spectral_gap(L);
    out.gap = out.spectrum.gap;
  }
  return out;
}

Liouvillian mix_effective_liouvillian(const SystemParams& t0_params) {
  const auto a = reduce(partition(with_phi(t0_params, 0.0))).liouvillian();
  const auto b = reduce(partition(with_phi(t0_params, std::numbers::pi))).liouvillian();
  return {a.space, 0.5 * (a.m + b.m)};
}

namespace {

SteadyRun steady_mix_effective(const SystemParams& t0_params, bool with_gap) {
  const auto L = mix_effective_liouvillian(t0_params);
  SteadyRun out;
  out.params = t0_params;
  out.rho = steady_state(L, {}, &out.info);
  out.fidelity = fidelity(out.rho, singlet(L.space));
  if (with_gap) {
    out.spectrum = spectral_gap(L);
    out.gap = out.spectrum.gap;
  }
  return out;
}

}  // namespace

SchemeSteady scheme_steady(SchemeId id, double g, double gamma, double kappa, double Omega,
                           const PresetOptions& opts) {
  SchemeSteady out;
  out.scheme = id;
  out.params = preset(id, g, gamma, kappa, Omega, opts);
  out.analytic_gap = gap_analytic(id, out.params);
  out.analytic_error = analytic_error(id, out.params);
  if (id == SchemeId::T0S0_mix) {
    const double f0 = steady_full(preset(SchemeId::T0, g, gamma, kappa, Omega, opts), false).fidelity;
    const double f1 = steady_full(preset(SchemeId::S0, g, gamma, kappa, Omega, opts), false).fidelity;
    out.fidelity = 0.5 * (f0 + f1);
    const auto eff = steady_mix_effective(out.params, true);
    out.gap = eff.gap;
    out.effective_fidelity = eff.fidelity;
    return out;
  }
  const auto full = steady_full(out.params, true);
  out.fidelity = full.fidelity;
  out.gap = full.gap;
  out.effective_fidelity = steady_effective(out.params, false, false).fidelity;
  return out;
}

namespace {

using Task = std::function<std::vector<SweepRow>()>;

std::vector<SweepRow> run_tasks(const std::vector<Task>& tasks, const std::vector<SweepRow>& stubs) {
  std::vector<std::vector<SweepRow>> results(tasks.size());
  std::vector<std::string> statuses(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t i) {
    try {
      results[i] = tasks[i]();
    } catch (const Error& e) {
      statuses[i] = status_of(e);
      throw;
    }
  });
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (!statuses[i].empty() || results[i].empty()) {
      SweepRow r = stubs[i];
      r.status = statuses[i].empty() ? "error:numerical-instability" : statuses[i];
      r.fidelity = r.error = r.gap = kNaN;
      rows.push_back(r);
      continue;
    }
    rows.insert(rows.end(), results[i].begin(), results[i].end());
  }
  return rows;
}

SweepRow make_row(const std::string& axis, double value, SchemeId id, const char* method, double fidelity,
                  double error, double gap) {
  return {axis, value, to_string(id), method, fidelity, error, gap, "ok"};
}

}  // namespace

std::vector<SweepRow> sweep_cooperativity(const std::vector<SchemeId>& schemes, const std::vector<double>& Cs,
                                          const SweepBase& base) {
  std::vector<Task> tasks;
  std::vector<SweepRow> stubs;
  const double drive_fraction = base.Omega / base.gamma;
  for (double C : Cs)
    for (SchemeId id : schemes) {
      stubs.push_back({"cooperativity", C, to_string(id), "full"});
      tasks.push_back([=]() {
        double gamma = 0.0, kappa = 0.0;
        rates_for_cooperativity(C, base.ratio, gamma, kappa);
        gamma *= base.g;
        kappa *= base.g;
        const auto s = scheme_steady(id, base.g, gamma, kappa, drive_fraction * gamma, base.preset);
        std::vector<SweepRow> rows;
        const bool mix = id == SchemeId::T0S0_mix;
        rows.push_back(make_row("cooperativity", C, id, "full", s.fidelity, 1.0 - s.fidelity, mix ? kNaN : s.gap));
        if (mix)
          rows.push_back(make_row("cooperativity", C, id, "effective", s.effective_fidelity,
                                  1.0 - s.effective_fidelity, s.gap));
        const double err = static_error(id, C);
        rows.push_back(make_row("cooperativity", C, id, "analytic", 1.0 - err, err, s.analytic_gap));
        return rows;
      });
    }
  return run_tasks(tasks, stubs);
}

std::vector<SweepRow> sweep_drive(const std::vector<SchemeId>& schemes, const std::vector<double>& Omegas,
                                  const SweepBase& base) {
  std::vector<Task> tasks;
  std::vector<SweepRow> stubs;
  PresetOptions popts = base.preset;
  popts.warn_out_of_range = false;
  for (double Om : Omegas)
    for (SchemeId id : schemes) {
      stubs.push_back({"drive", Om, to_string(id), "full"});
      tasks.push_back([=]() {
        std::vector<SweepRow> rows;
        const auto p = preset(id, base.g, base.gamma, base.kappa, Om, popts);
        if (id == SchemeId::T0S0_mix) {
          const auto s = scheme_steady(id, base.g, base.gamma, base.kappa, Om, popts);
          rows.push_back(make_row("drive", Om, id, "full", s.fidelity, 1.0 - s.fidelity, kNaN));
          rows.push_back(make_row("drive", Om, id, "effective", s.effective_fidelity, 1.0 - s.effective_fidelity,
                                  s.gap));
          rows.push_back(make_row("drive", Om, id, "analytic", 1.0 - s.analytic_error, s.analytic_error,
                                  s.analytic_gap));
          return rows;
        }
        const auto full = steady_full(p, true);
        rows.push_back(make_row("drive", Om, id, "full", full.fidelity, 1.0 - full.fidelity, full.gap));
        const auto eff = steady_effective(p, false, true);
        rows.push_back(make_row("drive", Om, id, "effective", eff.fidelity, 1.0 - eff.fidelity, eff.gap));
        const auto dr = steady_effective(p, true, true);
        rows.push_back(make_row("drive", Om, id, "dressed_effective", dr.fidelity, 1.0 - dr.fidelity, dr.gap));
        const double err = analytic_error(id, p);
        const double gap = id == SchemeId::S1 ? gap_S1_dressed(p) : gap_analytic(id, p);
        rows.push_back(make_row("drive", Om, id, "analytic", 1.0 - err, err, gap));
        return rows;
      });
    }
  return run_tasks(tasks, stubs);
}

double timed_fidelity_S1(double Omega, double t, const SweepBase& base, Integrator integrator, double rk4_dt) {
  PresetOptions popts = base.preset;
  popts.warn_out_of_range = false;
  const auto p = preset(SchemeId::S1, base.g, base.gamma, base.kappa, Omega, popts);
  const auto space = default_space(p);
  const auto L = vectorize(build_master_equation(p, space));
  const auto rho0 = mixed_ground_state(space);
  DensityMatrix rho;
  if (integrator == Integrator::Exact) {
    rho = evolve_exact(rho0, L, t);
  } else {
    PropagateOptions o;
    o.integrator = Integrator::RK4;
    o.sample_every = std::numeric_limits<int>::max() / 512;
    rho = propagate(rho0, L, t, rk4_dt, o).back().rho;
  }
  return fidelity(rho, singlet(space));
}

std::vector<SweepRow> sweep_time(const std::vector<double>& times, const SweepBase& base) {
  std::vector<Task> tasks;
  std::vector<SweepRow> stubs;
  const auto ref = preset(SchemeId::S1, base.g, base.gamma, base.kappa, base.Omega, base.preset);
  for (double t : times) {
    stubs.push_back({"time", t, to_string(SchemeId::S1), "full"});
    tasks.push_back([=]() {
      const auto opt = optimal_drive_for_time(t, ref);
      const double f = timed_fidelity_S1(opt.Omega, t, base);
      std::vector<SweepRow> rows;
      rows.push_back(make_row("time", t, SchemeId::S1, "full", f, 1.0 - f, kNaN));
      rows.push_back(make_row("time", t, SchemeId::S1, "analytic", 1.0 - opt.error, opt.error, kNaN));
      return rows;
    });
  }
  return run_tasks(tasks, stubs);
}

std::vector<SweepRow> sweep_asymmetry(const std::vector<SchemeId>& schemes, const std::vector<double>& alphas,
                                      const SweepBase& base) {
  std::vector<Task> tasks;
  std::vector<SweepRow> stubs;
  for (double a : alphas)
    for (SchemeId id : schemes) {
      stubs.push_back({"asymmetry", a, to_string(id), "full"});
      tasks.push_back([=]() {
        if (id == SchemeId::T0S0_mix) throw Error(ErrorCode::InvalidArgument, "asymmetry sweep needs a single-phase scheme");
        auto p = preset(id, base.g, base.gamma, base.kappa, base.Omega, base.preset);
        p.alpha = a;
        const auto full = steady_full(p, true);
        std::vector<SweepRow> rows;
        rows.push_back(make_row("asymmetry", a, id, "full", full.fidelity, 1.0 - full.fidelity, full.gap));
        // loss relative to alpha = 0 only; the fidelity column is left empty
        rows.push_back(make_row("asymmetry", a, id, "analytic_loss", kNaN, asymmetry_error(a), kNaN));
        return rows;
      });
    }
  return run_tasks(tasks, stubs);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorCode::InvalidArgument, "slope fit needs two or more points");
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (!(x[k] > 0.0) || !(y[k] > 0.0)) throw Error(ErrorCode::InvalidArgument, "log-log fit needs positive data");
    A(i, 0) = std::log(x[k]);
    A(i, 1) = 1.0;
    b(i) = std::log(y[k]);
  }
  return A.colPivHouseholderQr().solve(b)(0);
}

double quadratic_coefficient(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.empty()) throw Error(ErrorCode::InvalidArgument, "fit needs matching data");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double x2 = x[i] * x[i];
    num += y[i] * x2;
    den += x2 * x2;
  }
  if (den == 0.0) throw Error(ErrorCode::InvalidArgument, "quadratic fit needs a nonzero abscissa");
  return num / den;
}

namespace {

// Liouvillian whose steady state defines the Table-1 error of a scheme at drive Omega.
Liouvillian table_liouvillian(SchemeId id, double g, double gamma, double kappa, double Omega,
                              const PresetOptions& popts) {
  const auto p = preset(id, g, gamma, kappa, Omega, popts);
  if (id == SchemeId::T0S0_mix) return mix_effective_liouvillian(p);
  return vectorize(build_master_equation(p, default_space(p)));
}

}  // namespace

Table1Row table1_row(SchemeId id, double g, double gamma, double kappa, const Table1Options& opts) {
  Table1Row row;
  row.scheme = id;
  row.needs_confinement = needs_confinement(id);
  row.static_error = static_error(id, cooperativity(g, gamma, kappa));
  PresetOptions popts = opts.preset;
  popts.warn_out_of_range = false;
  row.max_fidelity = scheme_steady(id, g, gamma, kappa, opts.weak_fraction * gamma, popts).fidelity;

  auto error_at = [&](double Om) {
    const auto L = table_liouvillian(id, g, gamma, kappa, Om, popts);
    return 1.0 - fidelity(steady_state(L), singlet(L.space));
  };
  const double lo = opts.reference_fraction * gamma;
  const double target = error_at(lo) + opts.dynamic_error;
  auto f = [&](double Om) { return error_at(Om) - target; };
  double hi = 2.0 * gamma;
  double f_hi = f(hi);
  while (f_hi < 0.0 && hi < opts.omega_limit * g) {
    hi = std::min(2.0 * hi, opts.omega_limit * g);
    f_hi = f(hi);
  }
  if (f_hi < 0.0)
    throw Error(ErrorCode::NoBracket, std::string(to_string(id)) + ": dynamic error stays below target up to Omega = " +
                                          std::to_string(hi));
  boost::math::tools::eps_tolerance<double> tol(40);
  std::uintmax_t iters = 100;
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f(lo), f_hi, tol, iters);
  row.Omega_at_2pct = 0.5 * (a + b);

  const auto L = table_liouvillian(id, g, gamma, kappa, row.Omega_at_2pct, popts);
  const auto rho_ss = steady_state(L);
  row.gap_at_2pct = spectral_gap(L).gap;
  const auto conv =
      convergence_time(L, mixed_ground_state(L.space), rho_ss, row.gap_at_2pct, opts.convergence_threshold);
  const double to_us = 1.0 / (2.0 * std::numbers::pi * opts.g_over_2pi_MHz * g);
  row.convergence_time_us = conv.time * to_us;
  row.inverse_gap_us = conv.inverse_gap * to_us;
  return row;
}

std::vector<Table1Row> table1(double g, double gamma, double kappa, const Table1Options& opts) {
  std::vector<Table1Row> rows(kAllSchemes.size());
  const auto failures = parallel_for(kAllSchemes.size(), [&](std::size_t i) {
    rows[i] = table1_row(kAllSchemes[i], g, gamma, kappa, opts);
  });
  for (const auto& f : failures) {
    Table1Row r;
    r.scheme = kAllSchemes[f.index];
    r.needs_confinement = needs_confinement(r.scheme);
    r.static_error = static_error(r.scheme, cooperativity(g, gamma, kappa));
    r.max_fidelity = r.gap_at_2pct = r.convergence_time_us = r.Omega_at_2pct = r.inverse_gap_us = kNaN;
    r.status = std::string("error:") + to_string(f.code);
    rows[f.index] = r;
  }
  return rows;
}

const char* to_string(Method m) {
  switch (m) {
    case Method::Full: return "full";
    case Method::Effective: return "effective";
    case Method::DressedEffective: return "dressed_effective";
    case Method::Rate: return "rate";
  }
  return "?";
}

std::optional<Method> parse_method(const std::string& name) {
  for (Method m : {Method::Full, Method::Effective, Method::DressedEffective, Method::Rate})
    if (name == to_string(m)) return m;
  return std::nullopt;
}

DensityMatrix initial_state(const SpacePtr& space, const std::string& spec) {
  if (spec == "mixed") return mixed_ground_state(space);
  if (spec == "triplet")
    return mixture({named_state(space, NamedState::G00), named_state(space, NamedState::T),
                    named_state(space, NamedState::G11)});
  if (auto name = parse_named_state(spec)) return pure_state(named_state(space, *name));
  throw Error(ErrorCode::InvalidArgument, "unknown initial state '" + spec + "'");
}

namespace {

struct Projectors {
  VecC v00, vT, v11, vS;
};

Projectors projectors(const SpacePtr& space) {
  return {named_state(space, NamedState::G00).v, named_state(space, NamedState::T).v,
          named_state(space, NamedState::G11).v, named_state(space, NamedState::S).v};
}

PopulationRow populations(const char* method, double t, const MatC& rho, const Projectors& pr,
                          const std::vector<int>& ground_idx) {
  auto expect = [&](const VecC& v) { return v.dot(rho * v).real(); };
  PopulationRow r;
  r.method = method;
  r.t = t;
  r.P_00 = expect(pr.v00);
  r.P_T = expect(pr.vT);
  r.P_11 = expect(pr.v11);
  r.P_S = expect(pr.vS);
  double ground = 0.0;
  for (int i : ground_idx) ground += rho(i, i).real();
  r.P_excited_total = rho.trace().real() - ground;
  r.fidelity = std::clamp(r.P_S, 0.0, 1.0);
  return r;
}

std::vector<int> all_indices(int d) {
  std::vector<int> v(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) v[static_cast<std::size_t>(i)] = i;
  return v;
}

std::vector<TrajectoryPoint> sampled(const DensityMatrix& rho0, const Liouvillian& L, const TrajectoryRequest& req,
                                     PropagateStats* stats) {
  if (req.t_final == 0.0) return {{0.0, rho0}};
  const int n = std::max(1, req.samples);
  const double interval = req.t_final / n;
  PropagateOptions o;
  o.integrator = req.integrator;
  if (req.integrator == Integrator::Exact) return propagate(rho0, L, req.t_final, interval, o, stats);
  const int per = std::max(1, static_cast<int>(std::ceil(interval / req.rk4_dt)));
  o.sample_every = per;
  return propagate(rho0, L, req.t_final, interval / per, o, stats);
}

}  // namespace

TrajectoryResult run_trajectories(const TrajectoryRequest& req) {
  if (!(req.t_final >= 0.0)) throw Error(ErrorCode::InvalidArgument, "t_final must be >= 0");
  if (req.samples < 1) throw Error(ErrorCode::InvalidArgument, "samples must be >= 1");
  TrajectoryResult out;
  const auto& p = req.params;
  const auto space = default_space(p);
  const auto rho0 = initial_state(space, req.initial);
  const auto pm = partition(p, space);
  const Eigen::MatrixXcd R = restriction_matrix(*space, *pm.ground).cast<cplx>();
  const MatC rho0_g = R * rho0.m * R.adjoint();

  auto track = [&](const DensityMatrix& rho) {
    out.max_trace_drift = std::max(out.max_trace_drift, std::abs(rho.m.trace().real() - 1.0));
    out.min_eigenvalue = std::min(out.min_eigenvalue, min_eigenvalue(rho));
  };
  auto require_ground = [&]() {
    const double outside = 1.0 - rho0_g.trace().real();
    if (std::abs(outside) > 1e-12)
      throw Error(ErrorCode::InvalidArgument, "initial state has population outside the ground sector");
  };

  for (Method m : req.methods) {
    try {
      switch (m) {
        case Method::Full: {
          const auto L = vectorize(build_master_equation(p, space));
          const auto pr = projectors(space);
          for (const auto& pt : sampled(rho0, L, req, nullptr)) {
            track(pt.rho);
            out.rows.push_back(populations("full", pt.t, pt.rho.m, pr, pm.ground_idx));
          }
          break;
        }
        case Method::Effective:
        case Method::DressedEffective: {
          require_ground();
          const bool dressed = m == Method::DressedEffective;
          const EffectiveModel em = dressed ? reduce_dressed(pm) : reduce(pm);
          const auto L = em.liouvillian();
          const auto pr = projectors(em.ground);
          const auto idx = all_indices(em.ground->dim());
          for (const auto& pt : sampled({em.ground, rho0_g}, L, req, nullptr)) {
            track(pt.rho);
            out.rows.push_back(populations(to_string(m), pt.t, pt.rho.m, pr, idx));
          }
          break;
        }
        case Method::Rate: {
          require_ground();
          const auto rates = build_rates(p, true);
          const auto dv = dressed_ground_vectors(pm.ground, build_dressed_basis(p.Omega_MW, p.beta));
          const auto pr = projectors(pm.ground);
          Eigen::Vector4d P0;
          for (int l = 0; l < 4; ++l) P0(l) = dv[static_cast<std::size_t>(l)].dot(rho0_g * dv[static_cast<std::size_t>(l)]).real();
          const int n = std::max(1, req.samples);
          for (int k = 0; k <= (req.t_final > 0.0 ? n : 0); ++k) {
            const double t = req.t_final * k / n;
            const Eigen::Vector4d P = k == 0 ? P0 : rate_evolve(rates, P0, t);
            // incoherent mixture of the dressed states
            auto bare = [&](const VecC& v) {
              double s = 0.0;
              for (int l = 0; l < 4; ++l) s += P(l) * std::norm(v.dot(dv[static_cast<std::size_t>(l)]));
              return s;
            };
            PopulationRow r;
            r.method = "rate";
            r.t = t;
            r.P_00 = bare(pr.v00);
            r.P_T = bare(pr.vT);
            r.P_11 = bare(pr.v11);
            r.P_S = P(3);
            r.fidelity = std::clamp(P(3), 0.0, 1.0);
            out.rows.push_back(r);
          }
          break;
        }
      }
    } catch (const Error& e) {
      out.failures.push_back({to_string(m), e.what()});
    }
  }
  return out;
}

double max_singlet_deviation(const TrajectoryResult& r, const std::string& a, const std::string& b) {
  std::vector<const PopulationRow*> ra, rb;
  for (const auto& row : r.rows) {
    if (row.method == a) ra.push_back(&row);
    if (row.method == b) rb.push_back(&row);
  }
  if (ra.empty() || ra.size() != rb.size())
    throw Error(ErrorCode::InvalidArgument, "no aligned samples between " + a + " and " + b);
  const double scale = std::max(1.0, std::abs(ra.back()->t));
  double worst = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    if (std::abs(ra[i]->t - rb[i]->t) > 1e-9 * scale)
      throw Error(ErrorCode::InvalidArgument, "sample times of " + a + " and " + b + " differ");
    worst = std::max(worst, std::abs(ra[i]->P_S - rb[i]->P_S));
  }
  return worst;
}

}  // namespace lamcav
