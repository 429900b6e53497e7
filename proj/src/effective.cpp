#include "lamcav/effective.hpp"

#include <cmath>

#include "lamcav/errors.hpp"

namespace lamcav {

namespace {

MatC take(const MatC& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  MatC out(rows.size(), cols.size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(rows[i], cols[j]);
  return out;
}

MatC projector(int dim, const std::vector<int>& idx) {
  MatC p = MatC::Zero(dim, dim);
  for (int i : idx) p(i, i) = 1.0;
  return p;
}

}  // namespace

MatC PartitionedModel::ground_block(const MatC& m) const { return take(m, ground_idx, ground_idx); }
MatC PartitionedModel::excited_block(const MatC& m) const { return take(m, excited_idx, excited_idx); }
MatC PartitionedModel::excited_to_ground(const MatC& m) const { return take(m, ground_idx, excited_idx); }
MatC PartitionedModel::ground_to_excited(const MatC& m) const { return take(m, excited_idx, ground_idx); }

PartitionedModel partition(const SystemParams& p, const SpacePtr& space) {
  p.validate();
  PartitionedModel pm;
  pm.params = p;
  pm.space = space;
  pm.ground = ground_subspace(*space);
  pm.ground_idx = space->ground_indices();
  pm.excited_idx = space->excited_indices();
  pm.ground_projector = {space, projector(space->dim(), pm.ground_idx)};
  pm.excited_projector = {space, projector(space->dim(), pm.excited_idx)};
  pm.H_g = build_Hg(p, space);
  pm.H_e = build_He(p, space);
  auto v = build_V(p, space);
  const MatC& pg = pm.ground_projector.m;
  const MatC& pe = pm.excited_projector.m;
  pm.V_plus = {space, pe * v.V_plus.m * pg};
  pm.V_minus = adjoint(pm.V_plus);
  // drive terms inside the excited manifold belong to the eliminated dynamics
  pm.H_e.m += pe * (v.V_plus.m + v.V_minus.m) * pe;
  pm.lindblads = build_lindblads(p, space);
  return pm;
}

MatC build_HNH(const PartitionedModel& pm) {
  MatC h = pm.excited_block(pm.H_g.m + pm.H_e.m);
  for (const auto& l : pm.lindblads) h -= cplx(0.0, 0.5) * pm.excited_block(l.op.m.adjoint() * l.op.m);
  return h;
}

ComplexDetunings closed_form_propagators(const SystemParams& p) {
  ComplexDetunings c;
  const cplx ig(0.0, 0.5 * p.gamma);
  const cplx ik(0.0, 0.5 * p.kappa);
  for (int n = 0; n < 3; ++n) {
    c.Delta_tilde[static_cast<size_t>(n)] = p.Delta + n * p.beta - ig;
    c.delta_tilde[static_cast<size_t>(n)] = p.delta + n * p.beta - ik;
  }
  const double g2 = p.g * p.g;
  for (int n = 0; n < 3; ++n) {
    const auto un = static_cast<size_t>(n);
    const cplx dprev = c.Delta_tilde_at(n - 1);
    c.D[un] = n * g2 - c.delta_tilde[un] * dprev;
    if (n > 0 && std::abs(c.D[un]) < 1e-12 * g2)
      throw Error(ErrorCode::SingularPropagator, "denominator D_" + std::to_string(n) + " vanishes", n);
    c.Delta_eff[un] = dprev - n * g2 / c.delta_tilde[un];
    c.delta_eff[un] = c.delta_tilde[un] - n * g2 / dprev;
    if (n > 0) {
      const double sg = std::sqrt(static_cast<double>(n)) * p.g;
      c.g_eff[un] = sg - c.delta_tilde[un] * dprev / sg;
    }
  }
  return c;
}

MatC closed_form_inverse(const PartitionedModel& pm) {
  const auto& p = pm.params;
  const auto& sp = *pm.space;
  if (p.alpha != 0.0 || p.Omega_MW != 0.0 || p.b != 0.0)
    throw Error(ErrorCode::InvalidArgument, "closed-form blocks need alpha = Omega_MW = b = 0");
  if (sp.n_max() != 1 || !(sp.truncation() == Truncation::max_excitations(1)))
    throw Error(ErrorCode::InvalidArgument, "closed-form blocks need the single-excitation space with n_max = 1");
  const auto c = closed_form_propagators(p);
  const int ne = static_cast<int>(pm.excited_idx.size());
  MatC inv = MatC::Zero(ne, ne);
  auto ev = [&](NamedState s, int photon) -> VecC {
    const VecC full = named_state(pm.space, s, photon).v;
    VecC out(ne);
    for (int i = 0; i < ne; ++i) out(i) = full(pm.excited_idx[static_cast<size_t>(i)]);
    return out;
  };
  auto pair_block = [&](const VecC& a, const VecC& cav, int n) {
    const auto un = static_cast<size_t>(n);
    inv += (1.0 / c.Delta_eff[un]) * a * a.adjoint();
    inv += (1.0 / c.delta_eff[un]) * cav * cav.adjoint();
    inv += (1.0 / c.g_eff[un]) * (a * cav.adjoint() + cav * a.adjoint());
  };
  pair_block(ev(NamedState::T0, 0), ev(NamedState::T, 1), 1);
  pair_block(ev(NamedState::S0, 0), ev(NamedState::S, 1), 1);
  pair_block(ev(NamedState::T1, 0), ev(NamedState::G11, 1), 2);
  const VecC s1 = ev(NamedState::S1, 0);
  inv += (1.0 / c.Delta_eff[0]) * s1 * s1.adjoint();
  const VecC v001 = ev(NamedState::G00, 1);
  inv += (1.0 / c.delta_eff[0]) * v001 * v001.adjoint();
  return inv;
}

MatC invert_HNH(const MatC& hnh) {
  Eigen::PartialPivLU<MatC> lu(hnh);
  const double rc = lu.rcond();
  if (!(rc > 1e-13)) throw Error(ErrorCode::SingularPropagator, "H_NH is singular (rcond " + std::to_string(rc) + ")");
  return lu.inverse();
}

MasterEquation EffectiveModel::master_equation() const {
  MasterEquation me{{ground, H_eff}, {}};
  for (size_t k = 0; k < L_eff.size(); ++k) me.lindblads.push_back({labels[k], {ground, L_eff[k]}});
  return me;
}

Liouvillian EffectiveModel::liouvillian(Exec exec) const { return vectorize(H_eff, L_eff, ground, exec); }

namespace {

EffectiveModel assemble(const PartitionedModel& pm, const MatC& prop_vp) {
  EffectiveModel em;
  em.ground = pm.ground;
  const MatC vp = pm.ground_to_excited(pm.V_plus.m);
  const MatC x = vp.adjoint() * prop_vp;
  em.H_eff = -0.5 * (x + x.adjoint()) + pm.ground_block(pm.H_g.m);
  for (const auto& l : pm.lindblads) {
    em.labels.push_back(l.label);
    em.L_eff.push_back(pm.excited_to_ground(l.op.m) * prop_vp);
  }
  return em;
}

}  // namespace

EffectiveModel reduce(const PartitionedModel& pm) {
  const MatC inv = invert_HNH(build_HNH(pm));
  return assemble(pm, inv * pm.ground_to_excited(pm.V_plus.m));
}

EffectiveModel reduce_dressed(const PartitionedModel& pm, const std::vector<double>& energies, const MatC& modes,
                              Retention retention) {
  const Eigen::Index ng = static_cast<Eigen::Index>(pm.ground_idx.size());
  if (static_cast<Eigen::Index>(energies.size()) != ng || modes.rows() != ng || modes.cols() != ng)
    throw Error(ErrorCode::InvalidArgument, "need one energy and one mode per ground state");
  const MatC hnh = build_HNH(pm);
  const MatC vp = pm.ground_to_excited(pm.V_plus.m);
  const Eigen::Index ne = hnh.rows();

  Eigen::ComplexEigenSolver<MatC> es;
  MatC R, Rinv;
  std::vector<bool> near;
  if (retention == Retention::Selective) {
    es.compute(hnh);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::Eigensolver, "H_NH eigensolver failed");
    R = es.eigenvectors();
    Rinv = R.inverse();
    double lmin = es.eigenvalues().cwiseAbs().minCoeff();
    for (Eigen::Index i = 0; i < ne; ++i) near.push_back(std::abs(es.eigenvalues()(i)) <= 3.0 * lmin);
  }

  MatC acc = MatC::Zero(ne, ng);
  for (Eigen::Index l = 0; l < ng; ++l) {
    const double E = energies[static_cast<size_t>(l)];
    MatC inv;
    if (retention == Retention::Full) {
      try {
        inv = invert_HNH(hnh - E * MatC::Identity(ne, ne));
      } catch (const Error& err) {
        throw Error(ErrorCode::SingularPropagator, "shifted propagator for ground mode l = " + std::to_string(l) +
                                                       " is singular: " + err.what(), static_cast<long>(l));
      }
    } else {
      Eigen::VectorXcd d(ne);
      for (Eigen::Index i = 0; i < ne; ++i) {
        const cplx lam = es.eigenvalues()(i) - (near[static_cast<size_t>(i)] ? E : 0.0);
        if (std::abs(lam) < 1e-14)
          throw Error(ErrorCode::SingularPropagator, "shifted propagator for ground mode l = " + std::to_string(l) +
                                                         " is singular", static_cast<long>(l));
        d(i) = 1.0 / lam;
      }
      inv = R * d.asDiagonal() * Rinv;
    }
    acc += inv * vp * modes.col(l) * modes.col(l).adjoint();
  }
  EffectiveModel em = assemble(pm, acc);
  em.dressed = true;
  em.ground_energies = energies;
  em.ground_modes = modes;
  return em;
}

EffectiveModel reduce_dressed(const PartitionedModel& pm, Retention retention) {
  Eigen::SelfAdjointEigenSolver<MatC> es(pm.ground_block(pm.H_g.m));
  if (es.info() != Eigen::Success) throw Error(ErrorCode::Eigensolver, "ground Hamiltonian eigensolver failed");
  std::vector<double> energies(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return reduce_dressed(pm, energies, es.eigenvectors(), retention);
}

ShufflingRates shuffling_rates(const SystemParams& p) {
  ShufflingRates r;
  const double W = p.Omega_MW;
  const double g2 = p.gamma * p.gamma;
  r.gamma_eff = p.Omega * p.Omega / (8.0 * p.gamma);
  r.kappa_eff = p.kappa * p.Omega * p.Omega / (8.0 * p.g * p.g);
  r.gamma_d = r.gamma_eff * (g2 + 2.0 * W * W) / (g2 + 6.0 * W * W);
  r.chi_a = p.Omega * W / (2.0 * std::sqrt(p.gamma)) * cplx(p.gamma, -std::sqrt(2.0) * W) / (g2 + 6.0 * W * W);
  r.gamma_a = std::norm(r.chi_a);
  return r;
}

VecC ground_vector(const SpacePtr& ground, NamedState name) { return named_state(ground, name, 0).v; }

EffectiveModel dressed_shuffling_operators(const SystemParams& p, const SpacePtr& ground) {
  const auto r = shuffling_rates(p);
  const VecC e00 = ground_vector(ground, NamedState::G00);
  const VecC e11 = ground_vector(ground, NamedState::G11);
  const VecC eT = ground_vector(ground, NamedState::T);
  const VecC eS = ground_vector(ground, NamedState::S);
  auto ket_bra = [](const VecC& a, const VecC& b) -> MatC { return a * b.adjoint(); };
  const cplx i(0.0, 1.0);
  const cplx chi = r.chi_a;
  const cplx chic = std::conj(chi);
  const double sd = std::sqrt(r.gamma_d);
  const double sk = std::sqrt(r.kappa_eff);

  EffectiveModel em;
  em.ground = ground;
  em.dressed = true;
  em.H_eff = build_Hg(p, ground).m;
  em.labels.push_back("kappa");
  em.L_eff.push_back(sk * ket_bra(e11, eS) - 2.0 * sk * ket_bra(eS, e00));
  for (double s : {1.0, -1.0}) {
    em.labels.push_back(s > 0 ? "gamma0_1" : "gamma0_2");
    em.L_eff.push_back(s * i * sd * ket_bra(eT, eT) + i * sd * ket_bra(eS, eT) - s * chi * ket_bra(eT, e00) -
                       chi * ket_bra(eS, e00) - s * chic * ket_bra(eT, e11) - chic * ket_bra(eS, e11));
  }
  for (double s : {1.0, -1.0}) {
    em.labels.push_back(s > 0 ? "gamma1_1" : "gamma1_2");
    em.L_eff.push_back(-s * std::sqrt(2.0) * chi * ket_bra(e11, e00) - s * std::sqrt(2.0) * chic * ket_bra(e11, e11) +
                       s * i * std::sqrt(2.0) * sd * ket_bra(e11, eT));
  }
  return em;
}

}  // namespace lamcav
