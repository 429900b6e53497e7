#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "lamcav/effective.hpp"
#include "lamcav/model.hpp"

namespace lamcav {

// Vectors are written in the ordered basis {00, 11, T, S}.
struct DressedBasis {
  double A = 0.0;
  double B = 0.0;
  Eigen::Vector4d T_plus;
  Eigen::Vector4d T_minus;
  Eigen::Vector4d T_r;
  Eigen::Vector4d S;

  // Rows: T+, T-, Tr, S.
  Eigen::Matrix4d rows() const;
};

DressedBasis build_dressed_basis(double Omega_MW, double beta);

// Populations ordered (T+, T-, Tr, S). Columns sum to zero.
struct RateMatrix {
  Eigen::Matrix4d R = Eigen::Matrix4d::Zero();
};

enum class RateSource { Numeric, Analytic };

// Numeric: |<m|L|l>|^2 from the reduced operators (dressed reduction when
// dressed is set) in the dressed basis. Analytic: simplified S1 operators,
// with the triplet-to-singlet rates scaled by (g^2 + 2 W^2)/(g^2 + 6 W^2) when dressed.
RateMatrix build_rates(const SystemParams& p, bool dressed, RateSource source = RateSource::Numeric);
RateMatrix rates_from_operators(const std::vector<MatC>& ops, const std::vector<VecC>& dressed_vectors);

Eigen::Vector4d rate_steady_state(const RateMatrix& r);
double rate_gap(const RateMatrix& r);
// Triplet part of the slowest decaying eigenvector, normalized.
Eigen::Vector3d rate_slowest_triplet_mode(const RateMatrix& r);
Eigen::Vector4d rate_evolve(const RateMatrix& r, const Eigen::Vector4d& p0, double t);

struct RecyclingResult {
  double P_S = 0.0;
  double error_recy = 0.0;
  double rate_in = 0.0;  // Omega_MW^2 / (12 gamma_d)
  double kappa_eff = 0.0;
  double gamma_d = 0.0;
};

RecyclingResult recycling_model(const SystemParams& p);

// Ground-sector vectors (dim 4, parent ground ordering) of the dressed states.
std::vector<VecC> dressed_ground_vectors(const SpacePtr& ground, const DressedBasis& basis);

}  // namespace lamcav
