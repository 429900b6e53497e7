#include "lamcav/model.hpp"

#include <cmath>

#include "lamcav/errors.hpp"

namespace lamcav {

void SystemParams::validate() const {
  auto bad = [](const std::string& msg) { throw Error(ErrorCode::InvalidArgument, msg); };
  const double fields[] = {g, gamma, kappa, Omega, Omega_MW, Delta, delta, beta, phi, alpha, b};
  for (double f : fields)
    if (!std::isfinite(f)) bad("parameters must be finite");
  if (g <= 0.0) bad("g must be > 0");
  if (gamma <= 0.0) bad("gamma must be > 0");
  if (kappa <= 0.0) bad("kappa must be > 0");
  if (Omega < 0.0) bad("Omega must be >= 0");
  if (Omega_MW < 0.0) bad("Omega_MW must be >= 0");
  if (std::abs(alpha) >= 1.0) bad("|alpha| must be < 1");
  if (n_max < 1) bad("n_max must be >= 1");
}

SpacePtr default_space(const SystemParams& p) { return build_space(p.n_max, Truncation::max_excitations(1)); }

namespace {

MatC cavity_identity(const SpacePtr& space) { return MatC::Identity(space->n_max() + 1, space->n_max() + 1); }

}  // namespace

OperatorMatrix build_Hg(const SystemParams& p, const SpacePtr& space) {
  const Eigen::Matrix3cd id3 = Eigen::Matrix3cd::Identity();
  const MatC idc = cavity_identity(space);
  const Eigen::Matrix3cd p11 = atom_op(kLevel1, kLevel1);
  const Eigen::Matrix3cd flip = atom_op(kLevel1, kLevel0) + atom_op(kLevel0, kLevel1);
  OperatorMatrix h = zero_operator(space);
  // atom 1 carries +b and atom 2 carries -b
  h.m += (p.beta + p.b) * embed_product(space, p11, id3, idc).m;
  h.m += (p.beta - p.b) * embed_product(space, id3, p11, idc).m;
  h.m += 0.5 * p.Omega_MW * embed_product(space, flip, id3, idc).m;
  h.m += 0.5 * p.Omega_MW * embed_product(space, id3, flip, idc).m;
  return h;
}

OperatorMatrix build_Hac(const SystemParams& p, const SpacePtr& space) {
  const Eigen::Matrix3cd id3 = Eigen::Matrix3cd::Identity();
  const MatC a = annihilation(space->n_max());
  const MatC ad = a.adjoint();
  const Eigen::Matrix3cd down = atom_op(kLevel1, kLevelE);
  const Eigen::Matrix3cd up = atom_op(kLevelE, kLevel1);
  const double g1 = p.g * (1.0 + p.alpha);
  const double g2 = p.g * (1.0 - p.alpha);
  OperatorMatrix h = zero_operator(space);
  h.m += g1 * (embed_product(space, down, id3, ad).m + embed_product(space, up, id3, a).m);
  h.m += g2 * (embed_product(space, id3, down, ad).m + embed_product(space, id3, up, a).m);
  return h;
}

OperatorMatrix build_He(const SystemParams& p, const SpacePtr& space) {
  const Eigen::Matrix3cd id3 = Eigen::Matrix3cd::Identity();
  const MatC idc = cavity_identity(space);
  const MatC a = annihilation(space->n_max());
  const Eigen::Matrix3cd pe = atom_op(kLevelE, kLevelE);
  OperatorMatrix h = build_Hac(p, space);
  h.m += p.Delta * (embed_product(space, pe, id3, idc).m + embed_product(space, id3, pe, idc).m);
  h.m += p.delta * embed_product(space, id3, id3, a.adjoint() * a).m;
  return h;
}

DriveOperators build_V(const SystemParams& p, const SpacePtr& space) {
  const Eigen::Matrix3cd id3 = Eigen::Matrix3cd::Identity();
  const MatC idc = cavity_identity(space);
  const Eigen::Matrix3cd up = atom_op(kLevelE, kLevel0);
  OperatorMatrix vp = zero_operator(space);
  vp.m += 0.5 * p.Omega * embed_product(space, up, id3, idc).m;
  vp.m += 0.5 * p.Omega * std::polar(1.0, p.phi) * embed_product(space, id3, up, idc).m;
  return {vp, adjoint(vp)};
}

std::vector<LabeledOperator> build_lindblads(const SystemParams& p, const SpacePtr& space) {
  const Eigen::Matrix3cd id3 = Eigen::Matrix3cd::Identity();
  const MatC idc = cavity_identity(space);
  std::vector<LabeledOperator> out;
  out.push_back({"kappa", scale(embed_product(space, id3, id3, annihilation(space->n_max())), std::sqrt(p.kappa))});
  const double amp = std::sqrt(0.5 * p.gamma);
  for (int target : {kLevel0, kLevel1}) {
    const Eigen::Matrix3cd jump = atom_op(target, kLevelE);
    out.push_back({"gamma" + std::to_string(target) + "_1", scale(embed_product(space, jump, id3, idc), amp)});
    out.push_back({"gamma" + std::to_string(target) + "_2", scale(embed_product(space, id3, jump, idc), amp)});
  }
  return out;
}

MasterEquation build_master_equation(const SystemParams& p, const SpacePtr& space) {
  p.validate();
  if (space->n_max() != p.n_max)
    throw Error(ErrorCode::InvalidArgument, "space photon cutoff does not match params.n_max");
  auto v = build_V(p, space);
  OperatorMatrix h = build_Hg(p, space) + build_He(p, space) + v.V_plus + v.V_minus;
  return {h, build_lindblads(p, space)};
}

}  // namespace lamcav
