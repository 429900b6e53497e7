#include "lamcav/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/roots.hpp>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "lamcav/errors.hpp"

namespace lamcav {

namespace kernels {

MatC assemble_serial(const MatC& H, const std::vector<MatC>& jumps) {
  const Eigen::Index d = H.rows();
  const MatC id = MatC::Identity(d, d);
  MatC out = cplx(0.0, -1.0) * (Eigen::kroneckerProduct(id, H).eval() - Eigen::kroneckerProduct(H.transpose(), id).eval());
  for (const auto& L : jumps) {
    const MatC LdL = L.adjoint() * L;
    out += Eigen::kroneckerProduct(L.conjugate(), L).eval();
    out -= 0.5 * (Eigen::kroneckerProduct(id, LdL).eval() + Eigen::kroneckerProduct(LdL.transpose(), id).eval());
  }
  return out;
}

MatC assemble_parallel(const MatC& H, const std::vector<MatC>& jumps) {
  const Eigen::Index d = H.rows();
  MatC decay = MatC::Zero(d, d);
  for (const auto& L : jumps) decay += L.adjoint() * L;
  const MatC left = cplx(0.0, -1.0) * H - 0.5 * decay;
  const MatC right = cplx(0.0, 1.0) * H - 0.5 * decay;
  MatC out(d * d, d * d);
#pragma omp parallel for collapse(2) schedule(static)
  for (Eigen::Index b = 0; b < d; ++b) {
    for (Eigen::Index e = 0; e < d; ++e) {
      auto blk = out.block(d * b, d * e, d, d);
      blk.setZero();
      if (b == e) blk += left;
      blk.diagonal().array() += right(e, b);
      for (const auto& L : jumps) {
        const cplx w = std::conj(L(b, e));
        if (w != cplx(0.0)) blk += w * L;
      }
    }
  }
  return out;
}

void apply_serial(const MatC& L, const VecC& x, VecC& y) { y.noalias() = L * x; }

void apply_parallel(const MatC& L, const VecC& x, VecC& y) {
  const Eigen::Index n = L.rows();
  y.resize(n);
  const Eigen::Index chunk = 64;
  const Eigen::Index nchunks = (n + chunk - 1) / chunk;
#pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < nchunks; ++c) {
    const Eigen::Index r0 = c * chunk;
    const Eigen::Index len = std::min(chunk, n - r0);
    y.segment(r0, len).noalias() = L.middleRows(r0, len) * x;
  }
}

}  // namespace kernels

VecC vectorize_state(const MatC& rho) { return Eigen::Map<const VecC>(rho.data(), rho.size()); }

MatC unvectorize_state(const VecC& v, int dim) {
  if (v.size() != static_cast<Eigen::Index>(dim) * dim)
    throw Error(ErrorCode::InvalidArgument, "vector length does not match dim^2");
  return Eigen::Map<const MatC>(v.data(), dim, dim);
}

Liouvillian vectorize(const MatC& H, const std::vector<MatC>& jumps, const SpacePtr& space, Exec exec) {
  if (H.rows() != space->dim() || H.cols() != space->dim())
    throw Error(ErrorCode::InvalidArgument, "Hamiltonian does not match space dimension");
  for (const auto& L : jumps)
    if (L.rows() != H.rows() || L.cols() != H.cols())
      throw Error(ErrorCode::InvalidArgument, "Lindblad operator does not match space dimension");
  MatC m = exec == Exec::Parallel ? kernels::assemble_parallel(H, jumps) : kernels::assemble_serial(H, jumps);
  return {space, std::move(m)};
}

Liouvillian vectorize(const MasterEquation& me, Exec exec) {
  std::vector<MatC> jumps;
  for (const auto& l : me.lindblads) {
    require_same_space(me.space(), l.op.space, "vectorize");
    jumps.push_back(l.op.m);
  }
  return vectorize(me.H.m, jumps, me.space(), exec);
}

MatC apply_generator(const MasterEquation& me, const MatC& rho) {
  const cplx mi(0.0, -1.0);
  MatC out = mi * (me.H.m * rho - rho * me.H.m);
  for (const auto& l : me.lindblads) {
    const MatC& L = l.op.m;
    const MatC LdL = L.adjoint() * L;
    out += L * rho * L.adjoint() - 0.5 * (LdL * rho + rho * LdL);
  }
  return out;
}

namespace {

Eigen::VectorXd hermitian_eigenvalues(const MatC& m) {
  const MatC h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<MatC> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::Eigensolver, "Hermitian eigensolver failed");
  return es.eigenvalues();
}

cplx vec_trace(const VecC& x, Eigen::Index d) {
  cplx tr = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) tr += x(i + d * i);
  return tr;
}

}  // namespace

DensityMatrix steady_state(const Liouvillian& L, const SteadyStateOptions& opts, SteadyStateInfo* info) {
  const int d = L.space->dim();
  Eigen::BDCSVD<MatC> svd(L.m, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  const Eigen::Index n = s.size();
  const double smax = s(0);
  const double tol = opts.rel_cutoff < 0.0
                         ? static_cast<double>(std::max(L.m.rows(), L.m.cols())) *
                               std::numeric_limits<double>::epsilon() * smax
                         : opts.rel_cutoff * smax;
  int null_count = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (s(i) <= tol) ++null_count;
  SteadyStateInfo local;
  local.steady_dim = null_count;
  local.sigma_max = smax;
  local.sigma_null = s(n - 1);
  local.sigma_next = n >= 2 ? s(n - 2) : 0.0;
  if (info) *info = local;
  if (null_count == 0)
    throw Error(ErrorCode::NumericalInstability,
                "no singular value below tolerance (smallest " + std::to_string(s(n - 1) / smax) + " of sigma_max)", 0);
  if (null_count != 1)
    throw Error(ErrorCode::DegenerateSteadyState, "steady_dim = " + std::to_string(null_count), null_count);

  const VecC v = svd.matrixV().col(n - 1);
  MatC rho = unvectorize_state(v, d);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const cplx tr = rho.trace();
  if (std::abs(tr) < 1e-300) throw Error(ErrorCode::NumericalInstability, "null vector has zero trace");
  rho /= tr.real();
  DensityMatrix out{L.space, rho};
  local.residual = residual_norm(L, out);
  local.min_eigenvalue = min_eigenvalue(out);
  if (info) *info = local;
  if (local.min_eigenvalue < -opts.positivity_tol)
    throw Error(ErrorCode::NumericalInstability,
                "steady state has eigenvalue " + std::to_string(local.min_eigenvalue));
  return out;
}

SpectrumReport spectral_gap(const Liouvillian& L, double rel_tol) {
  Eigen::ComplexEigenSolver<MatC> es(L.m, false);
  if (es.info() != Eigen::Success) {
    const double norm = L.m.norm();
    throw Error(ErrorCode::Eigensolver, "Liouvillian eigensolver failed (Frobenius norm " + std::to_string(norm) +
                                            ", dim " + std::to_string(L.m.rows()) + ")");
  }
  SpectrumReport r;
  r.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::stable_sort(r.eigenvalues.begin(), r.eigenvalues.end(),
                   [](cplx a, cplx b) { return std::abs(a.real()) < std::abs(b.real()); });
  double max_re = 0.0;
  for (auto ev : r.eigenvalues) max_re = std::max(max_re, std::abs(ev.real()));
  r.degeneracy_tol = rel_tol * max_re;
  r.gap = std::numeric_limits<double>::infinity();
  for (auto ev : r.eigenvalues) {
    const double re = std::abs(ev.real());
    if (re <= r.degeneracy_tol)
      ++r.steady_dim;
    else
      r.gap = std::min(r.gap, re);
  }
  if (!std::isfinite(r.gap))
    throw Error(ErrorCode::DegenerateSteadyState, "no nonzero relaxation rate; gap undefined", r.steady_dim);
  return r;
}

DensityMatrix evolve_exact(const DensityMatrix& rho0, const Liouvillian& L, double t) {
  require_same_space(rho0.space, L.space, "evolve_exact");
  const MatC prop = (L.m * t).exp();
  const VecC x = prop * vectorize_state(rho0.m);
  return {L.space, unvectorize_state(x, L.space->dim())};
}

namespace {

struct RunResult {
  bool ok = false;
  std::vector<TrajectoryPoint> samples;
  double max_drift = 0.0;
  long steps = 0;
};

RunResult run_rk4(const DensityMatrix& rho0, const Liouvillian& L, double t_final, double dt,
                  const PropagateOptions& opts) {
  const int d = L.space->dim();
  const long nsteps = std::max<long>(1, static_cast<long>(std::ceil(t_final / dt - 1e-9)));
  const double h = t_final / static_cast<double>(nsteps);
  auto apply = opts.exec == Exec::Parallel ? kernels::apply_parallel : kernels::apply_serial;
  VecC x = vectorize_state(rho0.m);
  VecC k1(x.size()), k2(x.size()), k3(x.size()), k4(x.size()), tmp(x.size());
  const cplx tr0 = vec_trace(x, d);
  const double norm_cap = std::max(1.0, x.norm()) + 1e-6;
  RunResult r;
  r.samples.push_back({0.0, rho0});
  for (long s = 1; s <= nsteps; ++s) {
    apply(L.m, x, k1);
    tmp = x + 0.5 * h * k1;
    apply(L.m, tmp, k2);
    tmp = x + 0.5 * h * k2;
    apply(L.m, tmp, k3);
    tmp = x + h * k3;
    apply(L.m, tmp, k4);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double drift = std::abs(vec_trace(x, d) - tr0);
    r.max_drift = std::max(r.max_drift, drift);
    const double nrm = x.norm();
    if (!std::isfinite(nrm) || nrm > norm_cap) return r;
    if (s % opts.sample_every == 0 || s == nsteps)
      r.samples.push_back({h * static_cast<double>(s), {L.space, unvectorize_state(x, d)}});
  }
  r.steps = nsteps;
  r.ok = true;
  return r;
}

RunResult run_exact(const DensityMatrix& rho0, const Liouvillian& L, double t_final, double dt,
                    const PropagateOptions& opts) {
  const int d = L.space->dim();
  const long nsteps = std::max<long>(1, static_cast<long>(std::ceil(t_final / dt - 1e-9)));
  const double h = t_final / static_cast<double>(nsteps);
  const MatC prop = (L.m * h).exp();
  VecC x = vectorize_state(rho0.m);
  VecC y(x.size());
  const cplx tr0 = vec_trace(x, d);
  RunResult r;
  r.samples.push_back({0.0, rho0});
  for (long s = 1; s <= nsteps; ++s) {
    if (opts.exec == Exec::Parallel)
      kernels::apply_parallel(prop, x, y);
    else
      kernels::apply_serial(prop, x, y);
    x.swap(y);
    r.max_drift = std::max(r.max_drift, std::abs(vec_trace(x, d) - tr0));
    if (!x.allFinite()) return r;
    if (s % opts.sample_every == 0 || s == nsteps)
      r.samples.push_back({h * static_cast<double>(s), {L.space, unvectorize_state(x, d)}});
  }
  r.steps = nsteps;
  r.ok = true;
  return r;
}

}  // namespace

std::vector<TrajectoryPoint> propagate(const DensityMatrix& rho0, const Liouvillian& L, double t_final, double dt,
                                       const PropagateOptions& opts, PropagateStats* stats) {
  require_same_space(rho0.space, L.space, "propagate");
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be > 0");
  if (!(t_final >= 0.0)) throw Error(ErrorCode::InvalidArgument, "t_final must be >= 0");
  if (opts.sample_every < 1) throw Error(ErrorCode::InvalidArgument, "sample_every must be >= 1");
  if (t_final == 0.0) {
    if (stats) *stats = {dt, 0, 0.0, 0};
    return {{0.0, rho0}};
  }
  PropagateOptions o = opts;
  double step = dt;
  for (int halving = 0;; ++halving) {
    RunResult r = o.integrator == Integrator::RK4 ? run_rk4(rho0, L, t_final, step, o)
                                                  : run_exact(rho0, L, t_final, step, o);
    const bool last = halving >= o.max_halvings;
    if (r.ok && (r.max_drift <= o.drift_tol || (last && r.max_drift <= o.fail_tol))) {
      if (stats) *stats = {t_final / static_cast<double>(r.steps), halving, r.max_drift, r.steps};
      return std::move(r.samples);
    }
    if (last)
      throw Error(ErrorCode::StepSize, "trace drift " + std::to_string(r.max_drift) + " or instability after " +
                                           std::to_string(halving) + " step halvings (dt = " +
                                           std::to_string(step) + ")");
    step *= 0.5;
    o.sample_every *= 2;
  }
}

std::vector<TrajectoryPoint> propagate(const DensityMatrix& rho0, const MasterEquation& me, double t_final,
                                       double dt, const PropagateOptions& opts, PropagateStats* stats) {
  return propagate(rho0, vectorize(me, opts.exec), t_final, dt, opts, stats);
}

double fidelity(const DensityMatrix& rho, const StateVector& psi) {
  require_same_space(rho.space, psi.space, "fidelity");
  const cplx f = psi.v.dot(rho.m * psi.v);
  if (std::abs(f.imag()) > 1e-10) warn("fidelity has imaginary part " + std::to_string(f.imag()));
  return std::clamp(f.real(), 0.0, 1.0);
}

double trace_norm(const MatC& hermitian) { return hermitian_eigenvalues(hermitian).cwiseAbs().sum(); }

double min_eigenvalue(const DensityMatrix& rho) { return hermitian_eigenvalues(rho.m).minCoeff(); }

double residual_norm(const Liouvillian& L, const DensityMatrix& rho) {
  return (L.m * vectorize_state(rho.m)).norm();
}

DensityMatrix pure_state(const StateVector& psi) { return {psi.space, psi.v * psi.v.adjoint()}; }

DensityMatrix mixture(const std::vector<StateVector>& states) {
  if (states.empty()) throw Error(ErrorCode::InvalidArgument, "mixture of zero states");
  DensityMatrix out{states.front().space, MatC::Zero(states.front().space->dim(), states.front().space->dim())};
  for (const auto& s : states) {
    require_same_space(out.space, s.space, "mixture");
    out.m += s.v * s.v.adjoint();
  }
  out.m /= static_cast<double>(states.size());
  return out;
}

DensityMatrix mixed_ground_state(const SpacePtr& space) {
  const auto idx = space->ground_indices();
  if (idx.empty()) throw Error(ErrorCode::InvalidArgument, "space has no ground states");
  DensityMatrix out{space, MatC::Zero(space->dim(), space->dim())};
  for (int i : idx) out.m(i, i) = 1.0 / static_cast<double>(idx.size());
  return out;
}

ConvergenceResult convergence_time(const Liouvillian& L, const DensityMatrix& rho0, const DensityMatrix& rho_ss,
                                   double gap, double threshold) {
  if (!(gap > 0.0)) throw Error(ErrorCode::InvalidArgument, "gap must be > 0");
  const int d = L.space->dim();
  auto distance = [&](const VecC& x) { return trace_norm(unvectorize_state(x, d) - rho_ss.m); };
  ConvergenceResult out;
  out.inverse_gap = 1.0 / gap;
  VecC x = vectorize_state(rho0.m);
  if (distance(x) <= threshold) return out;
  const double h = 0.25 / gap;
  const MatC prop = (L.m * h).exp();
  const long max_steps = 4000;
  for (long k = 1; k <= max_steps; ++k) {
    VecC next = prop * x;
    if (distance(next) <= threshold) {
      auto f = [&](double tau) { return distance(((L.m * tau).exp() * x).eval()) - threshold; };
      boost::math::tools::eps_tolerance<double> tol(30);
      std::uintmax_t iters = 60;
      auto [lo, hi] = boost::math::tools::bisect(f, 0.0, h, tol, iters);
      out.time = h * static_cast<double>(k - 1) + 0.5 * (lo + hi);
      return out;
    }
    x = std::move(next);
  }
  throw Error(ErrorCode::NoBracket, "state did not converge within " + std::to_string(max_steps * h) + " time units");
}

}  // namespace lamcav
