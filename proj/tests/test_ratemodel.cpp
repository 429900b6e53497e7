#include <doctest.h>

#include <cmath>

#include "lamcav/ratemodel.hpp"
#include "lamcav/schemes.hpp"
#include "support.hpp"

using namespace lamcav;

namespace {

SystemParams s1(double Omega) { return preset(SchemeId::S1, 1.0, kTableGamma, kTableKappa, Omega); }

void check_columns(const RateMatrix& r) {
  for (int j = 0; j < 4; ++j) CHECK(std::abs(r.R.col(j).sum()) < 1e-14 * (1.0 + r.R.cwiseAbs().maxCoeff()));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) CHECK(r.R(i, j) >= 0.0);
}

}  // namespace

TEST_CASE("dressed basis") {
  const auto b = build_dressed_basis(0.02, 0.02 / std::sqrt(2.0));
  CHECK(b.A == doctest::Approx(std::sqrt(2.0 / 3.0)));
  const Eigen::Matrix4d M = b.rows();
  CHECK((M * M.transpose() - Eigen::Matrix4d::Identity()).norm() < 1e-14);
  CHECK(b.S == Eigen::Vector4d(0, 0, 0, 1));
  CHECK_THROWS_AS(build_dressed_basis(0.0, 0.0), Error);
}

TEST_CASE("rate matrices conserve probability") {
  for (bool dressed : {false, true})
    for (auto src : {RateSource::Numeric, RateSource::Analytic}) check_columns(build_rates(s1(0.02), dressed, src));
}

TEST_CASE("weak-drive rate model") {
  const auto p = s1(0.01);
  const auto r = build_rates(p, false);
  const Eigen::Vector4d ss = rate_steady_state(r);
  CHECK(ss.sum() == doctest::Approx(1.0));
  CHECK(ss.minCoeff() >= 0.0);
  CHECK(1.0 - ss(3) == doctest::Approx(1.5 / p.cooperativity()).epsilon(0.15));
  CHECK(rate_gap(r) == doctest::Approx(gap_analytic(SchemeId::S1, p)).epsilon(0.2));

  // numeric and simplified rates share the slowest triplet mode
  const Eigen::Vector3d mode = rate_slowest_triplet_mode(r);
  const Eigen::Vector3d simple = rate_slowest_triplet_mode(build_rates(p, false, RateSource::Analytic));
  CHECK(std::abs(mode.dot(simple)) > 0.999);
}

TEST_CASE("rate evolution") {
  const auto r = build_rates(s1(0.02), true);
  const Eigen::Vector4d p0(0.25, 0.25, 0.25, 0.25);
  CHECK((rate_evolve(r, p0, 0.0) - p0).norm() < 1e-12);
  const Eigen::Vector4d late = rate_evolve(r, p0, 50.0 / rate_gap(r));
  CHECK((late - rate_steady_state(r)).norm() < 1e-9);
  const Eigen::Vector4d mid = rate_evolve(r, p0, 1.0 / rate_gap(r));
  CHECK(mid.sum() == doctest::Approx(1.0));
}

TEST_CASE("rates from explicit operators") {
  const auto ground = build_space(1, Truncation::max_excitations(1));
  const auto g = ground_subspace(*ground);
  const auto basis = build_dressed_basis(0.02, 0.01);
  const auto vecs = dressed_ground_vectors(g, basis);
  REQUIRE(vecs.size() == 4);
  // a single jump |S><T+| gives exactly one off-diagonal rate
  const MatC L = vecs[3] * vecs[0].adjoint() * std::sqrt(0.3);
  const auto r = rates_from_operators({L}, vecs);
  CHECK(r.R(3, 0) == doctest::Approx(0.3));
  CHECK(r.R(0, 0) == doctest::Approx(-0.3));
  CHECK(r.R.cwiseAbs().sum() == doctest::Approx(0.6));
}

TEST_CASE("recycling model") {
  SystemParams p = s1(0.03);
  const auto rec = recycling_model(p);
  CHECK(rec.P_S > 0.0);
  CHECK(rec.P_S < 1.0);
  CHECK(rec.rate_in == doctest::Approx(p.Omega_MW * p.Omega_MW / (12 * rec.gamma_d)));
  CHECK(rec.error_recy == doctest::Approx(rec.kappa_eff / rec.rate_in));

  SystemParams strong = p;
  strong.Omega_MW *= 10;
  CHECK(recycling_model(strong).error_recy < rec.error_recy);

  p.Omega_MW = 0.0;
  try {
    recycling_model(p);
    FAIL("expected DivergentRecycling");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DivergentRecycling);
  }
}
