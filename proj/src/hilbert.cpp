#include "lamcav/hilbert.hpp"

#include <cmath>

#include "lamcav/errors.hpp"

namespace lamcav {

std::string to_string(const BasisLabel& label) {
  static const char* names[] = {"0", "1", "e"};
  return std::string("|") + names[label.a1] + names[label.a2] + ";" + std::to_string(label.n) + ">";
}

bool Truncation::keeps(const BasisLabel& label) const {
  if (kind == Kind::None) return true;
  return label.excitations() <= k;
}

HilbertSpace::HilbertSpace(int n_max, Truncation truncation, std::vector<BasisLabel> labels)
    : n_max_(n_max), truncation_(truncation), labels_(std::move(labels)) {
  for (size_t i = 0; i < labels_.size(); ++i) {
    auto [it, inserted] = index_map_.emplace(labels_[i], static_cast<int>(i));
    if (!inserted) throw Error(ErrorCode::InvalidArgument, "duplicate basis label " + to_string(labels_[i]));
  }
}

std::optional<int> HilbertSpace::index(const BasisLabel& label) const {
  auto it = index_map_.find(label);
  if (it == index_map_.end()) return std::nullopt;
  return it->second;
}

std::vector<int> HilbertSpace::ground_indices() const {
  std::vector<int> out;
  for (int i = 0; i < dim(); ++i)
    if (labels_[static_cast<size_t>(i)].is_ground()) out.push_back(i);
  return out;
}

std::vector<int> HilbertSpace::excited_indices() const {
  std::vector<int> out;
  for (int i = 0; i < dim(); ++i)
    if (!labels_[static_cast<size_t>(i)].is_ground()) out.push_back(i);
  return out;
}

SpacePtr build_space(int n_max, Truncation truncation) {
  if (n_max < 1) throw Error(ErrorCode::InvalidArgument, "n_max must be >= 1, got " + std::to_string(n_max));
  if (truncation.kind == Truncation::Kind::MaxTotalExcitations && truncation.k < 1)
    throw Error(ErrorCode::InvalidArgument, "excitation cap must be >= 1");
  std::vector<BasisLabel> labels;
  for (int a1 = 0; a1 < 3; ++a1)
    for (int a2 = 0; a2 < 3; ++a2)
      for (int n = 0; n <= n_max; ++n) {
        BasisLabel l{a1, a2, n};
        if (truncation.keeps(l)) labels.push_back(l);
      }
  return std::make_shared<const HilbertSpace>(n_max, truncation, std::move(labels));
}

SpacePtr ground_subspace(const HilbertSpace& parent) {
  std::vector<BasisLabel> labels;
  for (const auto& l : parent.labels())
    if (l.is_ground()) labels.push_back(l);
  return std::make_shared<const HilbertSpace>(parent.n_max(), parent.truncation(), std::move(labels));
}

Eigen::MatrixXd restriction_matrix(const HilbertSpace& full, const HilbertSpace& sub) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(sub.dim(), full.dim());
  for (int i = 0; i < sub.dim(); ++i) {
    auto j = full.index(sub.label(i));
    if (!j) throw Error(ErrorCode::InvalidArgument, "label " + to_string(sub.label(i)) + " missing from parent space");
    p(i, *j) = 1.0;
  }
  return p;
}

void require_same_space(const SpacePtr& a, const SpacePtr& b, const char* what) {
  if (!a || !b) throw Error(ErrorCode::InvalidArgument, std::string(what) + ": missing space");
  if (a != b && !(*a == *b))
    throw Error(ErrorCode::InvalidArgument, std::string(what) + ": operands live on different spaces (dim " +
                                                std::to_string(a->dim()) + " vs " + std::to_string(b->dim()) + ")");
}

OperatorMatrix zero_operator(const SpacePtr& space) { return {space, MatC::Zero(space->dim(), space->dim())}; }

OperatorMatrix identity_operator(const SpacePtr& space) {
  return {space, MatC::Identity(space->dim(), space->dim())};
}

OperatorMatrix add(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_space(a.space, b.space, "add");
  return {a.space, a.m + b.m};
}

OperatorMatrix scale(const OperatorMatrix& a, cplx s) { return {a.space, s * a.m}; }

OperatorMatrix multiply(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_space(a.space, b.space, "multiply");
  return {a.space, a.m * b.m};
}

OperatorMatrix adjoint(const OperatorMatrix& a) { return {a.space, a.m.adjoint()}; }

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_space(a.space, b.space, "commutator");
  return {a.space, a.m * b.m - b.m * a.m};
}

bool is_hermitian(const MatC& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return true;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

Eigen::Matrix3cd atom_op(int to, int from) {
  Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
  m(to, from) = 1.0;
  return m;
}

MatC annihilation(int n_max) {
  MatC a = MatC::Zero(n_max + 1, n_max + 1);
  for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

OperatorMatrix embed_product(const SpacePtr& space, const Eigen::Matrix3cd& a1, const Eigen::Matrix3cd& a2,
                             const MatC& cav) {
  const int nf = space->n_max() + 1;
  if (cav.rows() != nf || cav.cols() != nf)
    throw Error(ErrorCode::InvalidArgument, "cavity factor must be (n_max+1) x (n_max+1)");
  const int d = space->dim();
  MatC m = MatC::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const auto& li = space->label(i);
    for (int j = 0; j < d; ++j) {
      const auto& lj = space->label(j);
      m(i, j) = a1(li.a1, lj.a1) * a2(li.a2, lj.a2) * cav(li.n, lj.n);
    }
  }
  return {space, m};
}

OperatorMatrix tensor_embed(const SpacePtr& space, const MatC& local, Site site) {
  const Eigen::Matrix3cd id3 = Eigen::Matrix3cd::Identity();
  const MatC idc = MatC::Identity(space->n_max() + 1, space->n_max() + 1);
  switch (site) {
    case Site::Atom1:
      if (local.rows() != 3 || local.cols() != 3) break;
      return embed_product(space, local, id3, idc);
    case Site::Atom2:
      if (local.rows() != 3 || local.cols() != 3) break;
      return embed_product(space, id3, local, idc);
    case Site::Cavity:
      return embed_product(space, id3, id3, local);
  }
  throw Error(ErrorCode::InvalidArgument, "atomic site operators must be 3x3");
}

std::optional<NamedState> parse_named_state(const std::string& name) {
  static const std::map<std::string, NamedState> table = {
      {"S", NamedState::S},   {"T", NamedState::T},   {"00", NamedState::G00}, {"11", NamedState::G11},
      {"T0", NamedState::T0}, {"S0", NamedState::S0}, {"T1", NamedState::T1},  {"S1", NamedState::S1},
      {"psiS", NamedState::PsiS}, {"psi1", NamedState::Psi1}};
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

const char* to_string(NamedState name) {
  switch (name) {
    case NamedState::S: return "S";
    case NamedState::T: return "T";
    case NamedState::G00: return "00";
    case NamedState::G11: return "11";
    case NamedState::T0: return "T0";
    case NamedState::S0: return "S0";
    case NamedState::T1: return "T1";
    case NamedState::S1: return "S1";
    case NamedState::PsiS: return "psiS";
    case NamedState::Psi1: return "psi1";
  }
  return "?";
}

StateVector basis_state(const SpacePtr& space, const BasisLabel& label) {
  auto i = space->index(label);
  if (!i) throw Error(ErrorCode::InvalidArgument, "state " + to_string(label) + " is excluded by the truncation");
  VecC v = VecC::Zero(space->dim());
  v(*i) = 1.0;
  return {space, v};
}

namespace {

struct Term {
  int a1, a2;
  double amp;
};

StateVector superpose(const SpacePtr& space, const std::vector<Term>& terms, int photon, const char* name) {
  if (photon < 0 || photon > space->n_max())
    throw Error(ErrorCode::InvalidArgument, "photon number out of range for " + std::string(name));
  VecC v = VecC::Zero(space->dim());
  for (const auto& t : terms) {
    if (t.amp == 0.0) continue;
    BasisLabel l{t.a1, t.a2, photon};
    auto i = space->index(l);
    if (!i)
      throw Error(ErrorCode::InvalidArgument,
                  std::string(name) + " component " + to_string(l) + " is excluded by the truncation");
    v(*i) += t.amp;
  }
  double norm = v.norm();
  if (norm == 0.0) throw Error(ErrorCode::InvalidArgument, std::string(name) + " has zero norm");
  return {space, v / norm};
}

}  // namespace

StateVector named_state(const SpacePtr& space, NamedState name, int photon, double b, double omega_mw) {
  const double r = 1.0 / std::sqrt(2.0);
  switch (name) {
    case NamedState::S: return superpose(space, {{0, 1, r}, {1, 0, -r}}, photon, "S");
    case NamedState::T: return superpose(space, {{0, 1, r}, {1, 0, r}}, photon, "T");
    case NamedState::G00: return superpose(space, {{0, 0, 1.0}}, photon, "00");
    case NamedState::G11: return superpose(space, {{1, 1, 1.0}}, photon, "11");
    case NamedState::T0: return superpose(space, {{0, 2, r}, {2, 0, r}}, photon, "T0");
    case NamedState::S0: return superpose(space, {{0, 2, r}, {2, 0, -r}}, photon, "S0");
    case NamedState::T1: return superpose(space, {{1, 2, r}, {2, 1, r}}, photon, "T1");
    case NamedState::S1: return superpose(space, {{1, 2, r}, {2, 1, -r}}, photon, "S1");
    case NamedState::PsiS:
    case NamedState::Psi1: {
      double norm = std::hypot(b, omega_mw);
      if (norm == 0.0) throw Error(ErrorCode::InvalidArgument, "psiS/psi1 need b or Omega_MW nonzero");
      double c11 = name == NamedState::PsiS ? b / norm : omega_mw / norm;
      double cs = name == NamedState::PsiS ? omega_mw / norm : -b / norm;
      return superpose(space, {{1, 1, c11}, {0, 1, cs * r}, {1, 0, -cs * r}}, photon, to_string(name));
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown named state");
}

}  // namespace lamcav
