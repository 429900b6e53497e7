#pragma once

#include <complex>
#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lamcav {

using cplx = std::complex<double>;
using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;

// Atomic levels of a single Lambda atom.
enum Level : int { kLevel0 = 0, kLevel1 = 1, kLevelE = 2 };

struct BasisLabel {
  int a1 = 0;
  int a2 = 0;
  int n = 0;

  int excitations() const { return (a1 == kLevelE) + (a2 == kLevelE) + n; }
  bool is_ground() const { return n == 0 && a1 != kLevelE && a2 != kLevelE; }
  auto operator<=>(const BasisLabel&) const = default;
};

std::string to_string(const BasisLabel& label);

struct Truncation {
  enum class Kind { None, MaxTotalExcitations };
  Kind kind = Kind::None;
  int k = 0;

  static Truncation none() { return {}; }
  static Truncation max_excitations(int k) { return {Kind::MaxTotalExcitations, k}; }
  bool keeps(const BasisLabel& label) const;
  bool operator==(const Truncation&) const = default;
};

// Ordered basis of atom1 x atom2 x cavity. Ordering is atom1-major, then atom2,
// then photon number ascending; labels removed by the truncation are skipped.
class HilbertSpace {
 public:
  HilbertSpace(int n_max, Truncation truncation, std::vector<BasisLabel> labels);

  int dim() const { return static_cast<int>(labels_.size()); }
  int n_max() const { return n_max_; }
  const Truncation& truncation() const { return truncation_; }
  const std::vector<BasisLabel>& labels() const { return labels_; }
  const BasisLabel& label(int i) const { return labels_.at(static_cast<size_t>(i)); }
  std::optional<int> index(const BasisLabel& label) const;
  bool contains(const BasisLabel& label) const { return index(label).has_value(); }

  std::vector<int> ground_indices() const;
  std::vector<int> excited_indices() const;

  bool operator==(const HilbertSpace& other) const { return labels_ == other.labels_; }

 private:
  int n_max_;
  Truncation truncation_;
  std::vector<BasisLabel> labels_;
  std::map<BasisLabel, int> index_map_;
};

using SpacePtr = std::shared_ptr<const HilbertSpace>;

SpacePtr build_space(int n_max, Truncation truncation = Truncation::none());

// The four zero-photon states with both atoms in {0, 1}, in basis order.
SpacePtr ground_subspace(const HilbertSpace& parent);

// Real isometry P (sub.dim x full.dim) mapping full-space amplitudes onto the subspace.
Eigen::MatrixXd restriction_matrix(const HilbertSpace& full, const HilbertSpace& sub);

void require_same_space(const SpacePtr& a, const SpacePtr& b, const char* what);

struct OperatorMatrix {
  SpacePtr space;
  MatC m;
};

struct StateVector {
  SpacePtr space;
  VecC v;
};

OperatorMatrix zero_operator(const SpacePtr& space);
OperatorMatrix identity_operator(const SpacePtr& space);
OperatorMatrix add(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix scale(const OperatorMatrix& a, cplx s);
OperatorMatrix multiply(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix adjoint(const OperatorMatrix& a);
OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b);

inline OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) { return add(a, b); }
inline OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) { return multiply(a, b); }
inline OperatorMatrix operator*(cplx s, const OperatorMatrix& a) { return scale(a, s); }

bool is_hermitian(const MatC& m, double rel_tol = 1e-12);

// 3x3 atomic transition |to><from|.
Eigen::Matrix3cd atom_op(int to, int from);
// Photon annihilation on Fock states 0..n_max.
MatC annihilation(int n_max);

enum class Site { Atom1, Atom2, Cavity };

// Product operator a1 x a2 x cav evaluated on full product labels, then
// restricted to the retained basis. Passing identities for two factors gives a
// single-site embedding.
OperatorMatrix embed_product(const SpacePtr& space, const Eigen::Matrix3cd& a1, const Eigen::Matrix3cd& a2,
                             const MatC& cav);
OperatorMatrix tensor_embed(const SpacePtr& space, const MatC& local, Site site);

enum class NamedState { S, T, G00, G11, T0, S0, T1, S1, PsiS, Psi1 };

std::optional<NamedState> parse_named_state(const std::string& name);
const char* to_string(NamedState name);

StateVector basis_state(const SpacePtr& space, const BasisLabel& label);

// b and omega_mw are only read for PsiS and Psi1.
StateVector named_state(const SpacePtr& space, NamedState name, int photon = 0, double b = 0.0,
                        double omega_mw = 0.0);

}  // namespace lamcav
