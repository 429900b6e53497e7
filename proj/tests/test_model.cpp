#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lamcav/liouville.hpp"
#include "lamcav/model.hpp"
#include "lamcav/params_io.hpp"
#include "support.hpp"

using namespace lamcav;

namespace {

SpacePtr single() { return build_space(1, Truncation::max_excitations(1)); }

cplx element(const OperatorMatrix& op, const StateVector& a, const StateVector& b) { return a.v.dot(op.m * b.v); }

}  // namespace

TEST_CASE("parameter validation") {
  SystemParams p;
  CHECK_NOTHROW(p.validate());
  CHECK(p.cooperativity() == doctest::Approx(256.0 / 15.0));
  p.alpha = 1.0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  p.kappa = 0.0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  p.Omega = std::nan("");
  CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("ground Hamiltonian") {
  const auto s = single();
  SystemParams p;
  CHECK(build_Hg(p, s).m.norm() == 0.0);

  p.Omega_MW = 0.3;
  const auto Hg = build_Hg(p, s);
  CHECK(is_hermitian(Hg.m));
  // each atom contributes Omega_MW/2; the symmetric combination adds them
  CHECK(std::abs(element(Hg, named_state(s, NamedState::T), named_state(s, NamedState::G00)) -
                 p.Omega_MW / std::sqrt(2.0)) < 1e-14);
  CHECK(std::abs(element(Hg, named_state(s, NamedState::S), named_state(s, NamedState::G00))) < 1e-14);

  SystemParams q;
  q.b = 0.2;
  const auto Hb = build_Hg(q, s);
  CHECK(std::abs(element(Hb, named_state(s, NamedState::S), named_state(s, NamedState::T)) + q.b) < 1e-14);
}

TEST_CASE("excited Hamiltonian and asymmetric coupling") {
  const auto s = single();
  SystemParams p;
  p.Delta = 0.0;
  p.delta = 0.0;
  p.g = 0.0;
  CHECK(build_He(p, s).m.norm() == 0.0);

  SystemParams q;
  const auto Hac = build_Hac(q, s);
  CHECK(is_hermitian(build_He(q, s).m));
  CHECK(std::abs(element(Hac, named_state(s, NamedState::S0), named_state(s, NamedState::S, 1)) - q.g) < 1e-14);
  CHECK(std::abs(element(Hac, named_state(s, NamedState::T0), named_state(s, NamedState::T, 1)) - q.g) < 1e-14);

  q.alpha = 0.1;
  const auto Ha = build_Hac(q, s);
  CHECK(std::abs(element(Ha, basis_state(s, {kLevelE, 0, 0}), basis_state(s, {1, 0, 1})) - 1.1) < 1e-14);
  CHECK(std::abs(element(Ha, basis_state(s, {0, kLevelE, 0}), basis_state(s, {0, 1, 1})) - 0.9) < 1e-14);
}

TEST_CASE("S1 is dark only for symmetric coupling") {
  const auto s = single();
  for (double alpha : {0.0, 0.05}) {
    SystemParams p;
    p.alpha = alpha;
    const auto Hac = build_Hac(p, s);
    double leak = 0.0;
    for (auto name : {NamedState::S, NamedState::T, NamedState::G00, NamedState::G11})
      leak += std::norm(element(Hac, named_state(s, NamedState::S1), named_state(s, name, 1)));
    if (alpha == 0.0)
      CHECK(leak == 0.0);
    else
      CHECK(leak > 1e-4);
  }
}

TEST_CASE("drive operators") {
  const auto s = single();
  SystemParams p;
  p.Omega = 0.0;
  auto V = build_V(p, s);
  CHECK(V.V_plus.m.norm() == 0.0);

  p.Omega = 0.2;
  p.phi = std::numbers::pi;
  V = build_V(p, s);
  CHECK((V.V_minus.m - V.V_plus.m.adjoint()).norm() == 0.0);
  CHECK(std::abs(element(V.V_plus, named_state(s, NamedState::S1), named_state(s, NamedState::T))) > 1e-3);
  CHECK(std::abs(element(V.V_plus, named_state(s, NamedState::T1), named_state(s, NamedState::S))) > 1e-3);
  CHECK(std::abs(element(V.V_plus, named_state(s, NamedState::T1), named_state(s, NamedState::T))) < 1e-15);

  p.phi = 0.0;
  V = build_V(p, s);
  CHECK(std::abs(element(V.V_plus, named_state(s, NamedState::T0), named_state(s, NamedState::G00)) -
                 p.Omega / std::sqrt(2.0)) < 1e-14);
  CHECK(std::abs(element(V.V_plus, named_state(s, NamedState::T1), named_state(s, NamedState::S))) < 1e-15);
  CHECK(std::abs(element(V.V_plus, named_state(s, NamedState::S1), named_state(s, NamedState::S))) > 1e-3);
}

TEST_CASE("Lindblad operators") {
  const auto s = single();
  SystemParams p;
  const auto ls = build_lindblads(p, s);
  REQUIRE(ls.size() == 5);
  CHECK(ls[0].label == "kappa");
  MatC sum = MatC::Zero(s->dim(), s->dim());
  for (const auto& l : ls) sum += l.op.m.adjoint() * l.op.m;
  const int e1 = *s->index({kLevelE, 0, 0});
  CHECK(sum(e1, e1).real() == doctest::Approx(p.gamma));
  const VecC out = ls[0].op.m * named_state(s, NamedState::S, 1).v;
  CHECK((out - std::sqrt(p.kappa) * named_state(s, NamedState::S).v).norm() < 1e-14);

  SystemParams q;
  q.kappa = 1e-300;
  CHECK(build_lindblads(q, s)[0].op.m.norm() < 1e-149);
}

TEST_CASE("generator preserves trace and hermiticity") {
  std::mt19937_64 rng(11);
  SystemParams p;
  p.Omega_MW = 0.02;
  p.beta = 0.01;
  p.phi = 1.0;
  p.alpha = 0.05;
  const auto me = build_master_equation(p);
  for (int k = 0; k < 20; ++k) {
    const MatC rho = testing::random_hermitian(me.space()->dim(), rng);
    const MatC out = apply_generator(me, rho);
    CHECK(std::abs(out.trace()) < 1e-12 * rho.norm());
    CHECK((out - out.adjoint()).norm() < 1e-12 * rho.norm());
  }
  SystemParams bad;
  bad.n_max = 2;
  CHECK_THROWS_AS(build_master_equation(bad, single()), Error);
}

TEST_CASE("parameter files round-trip") {
  SystemParams p;
  p.Omega_MW = 0.123456789012345;
  p.phi = std::numbers::pi;
  p.n_max = 2;
  CHECK(params_from_json(params_to_json(p)) == p);
  CHECK(params_from_kv(params_to_kv(p)) == p);
  CHECK(params_from_kv("# comment\ng = 2\n").g == 2.0);
  CHECK_THROWS_AS(params_from_kv("bogus = 1\n"), Error);
  CHECK_THROWS_AS(params_from_json(nlohmann::json{{"bogus", 1}}), Error);
  double v = 0.0;
  CHECK(get_param(p, "n_max", v));
  CHECK(v == 2.0);
  CHECK_FALSE(set_param(p, "nope", 1.0));
  CHECK(param_keys().size() == 12);
}
