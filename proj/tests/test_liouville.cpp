#include <doctest.h>

#include <cmath>

#include "lamcav/liouville.hpp"
#include "lamcav/reproduce.hpp"
#include "support.hpp"

using namespace lamcav;

namespace {

SystemParams driven() {
  SystemParams p;
  p.Omega = 0.05;
  p.Omega_MW = 0.02;
  return p;
}

}  // namespace

TEST_CASE("vectorized generator matches direct evaluation") {
  std::mt19937_64 rng(3);
  for (int n_max : {1, 2}) {
    SystemParams p = driven();
    p.n_max = n_max;
    p.phi = 0.7;
    p.beta = 0.03;
    const auto me = build_master_equation(p);
    const auto L = vectorize(me, Exec::Serial);
    const int d = me.space()->dim();
    for (int k = 0; k < 5; ++k) {
      const MatC rho = testing::random_matrix(d, rng);
      const MatC direct = apply_generator(me, rho);
      const MatC via = unvectorize_state(L.m * vectorize_state(rho), d);
      CHECK((direct - via).norm() < 1e-12 * (1.0 + direct.norm()));
    }
  }
}

TEST_CASE("trace functional is a left null vector") {
  const auto L = vectorize(build_master_equation(driven()));
  const int d = L.space->dim();
  const VecC tr = vectorize_state(MatC::Identity(d, d));
  CHECK((tr.adjoint() * L.m).norm() < 1e-12);
}

TEST_CASE("steady state") {
  const auto L = vectorize(build_master_equation(driven()));
  SteadyStateInfo info;
  const auto rho = steady_state(L, {}, &info);
  CHECK(info.steady_dim == 1);
  CHECK(std::abs(rho.m.trace() - 1.0) < 1e-12);
  CHECK(is_hermitian(rho.m, 1e-10));
  CHECK(residual_norm(L, rho) < 1e-10);
  CHECK(min_eigenvalue(rho) > -1e-10);

  SUBCASE("undriven system has a degenerate steady state") {
    SystemParams p;
    p.Omega = 0.0;
    const auto L0 = vectorize(build_master_equation(p));
    try {
      steady_state(L0);
      FAIL("expected DegenerateSteadyState");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DegenerateSteadyState);
      CHECK(e.detail() > 1);
    }
  }
}

TEST_CASE("spectrum") {
  const auto L = vectorize(build_master_equation(driven()));
  const auto s = spectral_gap(L);
  CHECK(s.steady_dim == 1);
  CHECK(s.gap > 0.0);
  REQUIRE(s.eigenvalues.size() == static_cast<size_t>(L.m.rows()));
  CHECK(std::abs(s.eigenvalues.front()) < 1e-10);
  for (const auto& ev : s.eigenvalues) CHECK(ev.real() < 1e-10);
  // the generator is real in the sense of preserving hermiticity, so eigenvalues come in conjugate pairs
  for (const auto& ev : s.eigenvalues) {
    double best = 1e300;
    for (const auto& other : s.eigenvalues) best = std::min(best, std::abs(other - std::conj(ev)));
    CHECK(best < 1e-8);
  }
}

TEST_CASE("propagation") {
  const SystemParams p = driven();
  const auto me = build_master_equation(p);
  const auto L = vectorize(me);
  const auto rho0 = mixed_ground_state(me.space());
  CHECK(std::abs(rho0.m.trace() - 1.0) < 1e-15);

  SUBCASE("zero time returns the initial state") {
    const auto pts = propagate(rho0, L, 0.0, 0.1);
    REQUIRE(!pts.empty());
    CHECK((pts.front().rho.m - rho0.m).norm() == 0.0);
    CHECK((evolve_exact(rho0, L, 0.0).m - rho0.m).norm() < 1e-14);
  }
  SUBCASE("RK4 agrees with the exact propagator") {
    PropagateStats stats;
    const auto pts = propagate(rho0, L, 20.0, 0.05, {}, &stats);
    const auto exact = evolve_exact(rho0, L, 20.0);
    CHECK(std::abs(pts.back().t - 20.0) < 1e-12);
    CHECK(trace_norm(pts.back().rho.m - exact.m) < 1e-6);
    CHECK(stats.max_trace_drift < 1e-8);
    PropagateOptions ex;
    ex.integrator = Integrator::Exact;
    const auto pe = propagate(rho0, L, 20.0, 1.0, ex);
    CHECK(trace_norm(pe.back().rho.m - exact.m) < 1e-10);
  }
  SUBCASE("long-time limit is the steady state") {
    const auto rho_ss = steady_state(L);
    const double gap = spectral_gap(L).gap;
    const auto late = evolve_exact(rho0, L, 40.0 / gap);
    CHECK(trace_norm(late.m - rho_ss.m) < 1e-8);
  }
  SUBCASE("distance decays at the gap rate") {
    const auto rho_ss = steady_state(L);
    const double gap = spectral_gap(L).gap;
    const double t1 = 4.0 / gap;
    const double t2 = 8.0 / gap;
    const double d1 = trace_norm(evolve_exact(rho0, L, t1).m - rho_ss.m);
    const double d2 = trace_norm(evolve_exact(rho0, L, t2).m - rho_ss.m);
    const double rate = std::log(d1 / d2) / (t2 - t1);
    CHECK(rate == doctest::Approx(gap).epsilon(0.2));
  }
  SUBCASE("convergence time") {
    const auto rho_ss = steady_state(L);
    const double gap = spectral_gap(L).gap;
    const auto c = convergence_time(L, rho0, rho_ss, gap, 0.01);
    CHECK(c.inverse_gap == doctest::Approx(1.0 / gap));
    CHECK(c.time > 0.0);
    CHECK(trace_norm(evolve_exact(rho0, L, c.time).m - rho_ss.m) <= 0.0101);
  }
}

TEST_CASE("fidelity and state helpers") {
  const auto s = build_space(1, Truncation::max_excitations(1));
  const int d = s->dim();
  const DensityMatrix flat{s, MatC::Identity(d, d) / static_cast<double>(d)};
  CHECK(fidelity(flat, singlet(s)) == doctest::Approx(1.0 / d));
  CHECK(fidelity(pure_state(singlet(s)), singlet(s)) == doctest::Approx(1.0));
  const auto mix = mixture({named_state(s, NamedState::S), named_state(s, NamedState::T)});
  CHECK(fidelity(mix, singlet(s)) == doctest::Approx(0.5));
  CHECK(trace_norm(MatC::Identity(3, 3)) == doctest::Approx(3.0));
}

TEST_CASE("zero-length trajectories return the initial populations") {
  TrajectoryRequest req;
  req.params = preset(SchemeId::S1, 1.0, kTableGamma, kTableKappa, 0.03);
  req.t_final = 0.0;
  const auto r = run_trajectories(req);
  CHECK(r.failures.empty());
  CHECK(r.rows.size() == 4);
  for (const auto& row : r.rows) CHECK(row.P_S == doctest::Approx(0.25));
}
