#include "lamcav/ratemodel.hpp"

#include <cmath>

#include "lamcav/errors.hpp"

namespace lamcav {

Eigen::Matrix4d DressedBasis::rows() const {
  Eigen::Matrix4d m;
  m.row(0) = T_plus.transpose();
  m.row(1) = T_minus.transpose();
  m.row(2) = T_r.transpose();
  m.row(3) = S.transpose();
  return m;
}

DressedBasis build_dressed_basis(double Omega_MW, double beta) {
  const double norm = std::hypot(Omega_MW, beta);
  if (norm == 0.0) throw Error(ErrorCode::DegenerateBasis, "Omega_MW and beta both vanish");
  DressedBasis d;
  d.A = Omega_MW / norm;
  d.B = beta / norm;
  const double a = d.A / std::sqrt(2.0);
  d.T_plus << -(d.B - 1.0) / 2.0, (d.B + 1.0) / 2.0, a, 0.0;
  d.T_minus << -(d.B + 1.0) / 2.0, (d.B - 1.0) / 2.0, a, 0.0;
  d.T_r << a, -a, d.B, 0.0;
  d.S << 0.0, 0.0, 0.0, 1.0;
  return d;
}

std::vector<VecC> dressed_ground_vectors(const SpacePtr& ground, const DressedBasis& basis) {
  const VecC e00 = ground_vector(ground, NamedState::G00);
  const VecC e11 = ground_vector(ground, NamedState::G11);
  const VecC eT = ground_vector(ground, NamedState::T);
  const VecC eS = ground_vector(ground, NamedState::S);
  std::vector<VecC> out;
  for (const Eigen::Vector4d& c : {basis.T_plus, basis.T_minus, basis.T_r, basis.S})
    out.push_back(c(0) * e00 + c(1) * e11 + c(2) * eT + c(3) * eS);
  return out;
}

namespace {

void fill_diagonal(RateMatrix& r) {
  for (int l = 0; l < 4; ++l) {
    r.R(l, l) = 0.0;
    r.R(l, l) = -r.R.col(l).sum();
  }
}

}  // namespace

RateMatrix rates_from_operators(const std::vector<MatC>& ops, const std::vector<VecC>& vecs) {
  if (vecs.size() != 4) throw Error(ErrorCode::InvalidArgument, "rate model needs four dressed states");
  RateMatrix r;
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m) {
      if (m == l) continue;
      double w = 0.0;
      for (const auto& L : ops) w += std::norm(vecs[static_cast<size_t>(m)].dot(L * vecs[static_cast<size_t>(l)]));
      r.R(m, l) = w;
    }
  fill_diagonal(r);
  return r;
}

RateMatrix build_rates(const SystemParams& p, bool dressed, RateSource source) {
  const DressedBasis basis = build_dressed_basis(p.Omega_MW, p.beta);
  if (source == RateSource::Numeric) {
    const auto pm = partition(p);
    const EffectiveModel em = dressed ? reduce_dressed(pm) : reduce(pm);
    return rates_from_operators(em.L_eff, dressed_ground_vectors(em.ground, basis));
  }
  // simplified shuffling-picture operators in {00, 11, T, S} coordinates
  const double ge = p.Omega * p.Omega / (8.0 * p.gamma);
  const double ke = p.kappa * p.Omega * p.Omega / (8.0 * p.g * p.g);
  const cplx i(0.0, 1.0);
  auto unit = [](int k) {
    VecC v = VecC::Zero(4);
    v(k) = 1.0;
    return v;
  };
  const VecC e11 = unit(1), eT = unit(2), eS = unit(3);
  std::vector<MatC> ops;
  for (double s : {1.0, -1.0}) {
    ops.push_back(i * std::sqrt(ge) * (s * eT * eT.adjoint() + eS * eT.adjoint()));
    ops.push_back(s * i * std::sqrt(2.0 * ge) * e11 * eT.adjoint());
  }
  ops.push_back(std::sqrt(ke) * e11 * eS.adjoint());
  std::vector<VecC> vecs;
  const Eigen::Matrix4d rows = basis.rows();
  for (int k = 0; k < 4; ++k) vecs.push_back(rows.row(k).transpose().cast<cplx>());
  RateMatrix r = rates_from_operators(ops, vecs);
  if (dressed) {
    const double w2 = p.Omega_MW * p.Omega_MW, g2 = p.gamma * p.gamma;
    const double eta = (g2 + 2.0 * w2) / (g2 + 6.0 * w2);
    for (int l = 0; l < 3; ++l) r.R(3, l) *= eta;
    fill_diagonal(r);
  }
  return r;
}

Eigen::Vector4d rate_steady_state(const RateMatrix& r) {
  Eigen::FullPivLU<Eigen::Matrix4d> lu(r.R);
  Eigen::MatrixXd ker = lu.kernel();
  if (ker.cols() != 1) throw Error(ErrorCode::DegenerateSteadyState, "rate matrix null space", ker.cols());
  Eigen::Vector4d v = ker.col(0);
  return v / v.sum();
}

namespace {

Eigen::EigenSolver<Eigen::Matrix4d> rate_eigen(const RateMatrix& r) {
  Eigen::EigenSolver<Eigen::Matrix4d> es(r.R);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::Eigensolver, "rate matrix eigensolver failed");
  return es;
}

int slowest_index(const Eigen::EigenSolver<Eigen::Matrix4d>& es, double& gap) {
  const auto ev = es.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  int zero = 0;
  for (int k = 1; k < 4; ++k)
    if (std::abs(ev(k)) < std::abs(ev(zero))) zero = k;
  int best = -1;
  gap = INFINITY;
  for (int k = 0; k < 4; ++k) {
    if (k == zero) continue;
    const double re = std::abs(ev(k).real());
    if (re > 1e-12 * scale && re < gap) {
      gap = re;
      best = k;
    }
  }
  if (best < 0) throw Error(ErrorCode::DegenerateSteadyState, "rate matrix has no decaying mode");
  return best;
}

}  // namespace

double rate_gap(const RateMatrix& r) {
  double gap = 0.0;
  slowest_index(rate_eigen(r), gap);
  return gap;
}

Eigen::Vector3d rate_slowest_triplet_mode(const RateMatrix& r) {
  const auto es = rate_eigen(r);
  double gap = 0.0;
  const int k = slowest_index(es, gap);
  Eigen::Vector4cd v = es.eigenvectors().col(k);
  // fix the global phase on the largest component
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  v *= std::abs(v(imax)) / v(imax);
  Eigen::Vector3d t = v.head<3>().real();
  return t / t.norm();
}

Eigen::Vector4d rate_evolve(const RateMatrix& r, const Eigen::Vector4d& p0, double t) {
  const auto es = rate_eigen(r);
  const Eigen::Matrix4cd V = es.eigenvectors();
  const Eigen::Vector4cd c = V.partialPivLu().solve(p0.cast<cplx>());
  Eigen::Vector4cd d;
  for (int k = 0; k < 4; ++k) d(k) = std::exp(es.eigenvalues()(k) * t) * c(k);
  return (V * d).real();
}

RecyclingResult recycling_model(const SystemParams& p) {
  if (!(p.Omega_MW > 0.0)) throw Error(ErrorCode::DivergentRecycling, "Omega_MW = 0 gives no recycling out of |11>");
  const auto sr = shuffling_rates(p);
  RecyclingResult out;
  out.kappa_eff = sr.kappa_eff;
  out.gamma_d = sr.gamma_d;
  out.rate_in = p.Omega_MW * p.Omega_MW / (12.0 * sr.gamma_d);
  out.P_S = out.rate_in / (out.rate_in + out.kappa_eff);
  out.error_recy = 12.0 * out.kappa_eff * out.gamma_d / (p.Omega_MW * p.Omega_MW);
  return out;
}

}  // namespace lamcav
