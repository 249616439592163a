#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "willis/hermitian.hpp"
#include "willis/lattice.hpp"
#include "willis/material.hpp"
#include "willis/pwe_scalar.hpp"

namespace willis {

// Precomputed Fourier coefficients of C, rho and S over the doubled box.
// Displacement unknowns are ordered g-major, Cartesian-minor: 3*g + i.
class ElasticModel {
 public:
  ElasticModel(ElasticProfile profile, int truncation);

  const ElasticProfile& profile() const { return profile_; }
  const PlaneWaveBasis& basis() const { return basis_; }
  std::size_t unknowns() const { return 3 * basis_.size(); }

  // Reciprocal vector i embedded in 3D.
  const Eigen::Vector3d& g(std::size_t i) const { return g3_[i]; }
  cplx C(std::size_t slot, int i, int j, int k, int l) const {
    return c_[slot](voigt(i, j), voigt(k, l));
  }
  const Matrix6cd& C(std::size_t slot) const { return c_[slot]; }
  const Eigen::Matrix3cd& rho(std::size_t slot) const { return rho_[slot]; }
  const Matrix63cd& S(std::size_t slot) const { return s_[slot]; }
  std::size_t slot(std::size_t a, std::size_t b) const {
    return basis_.difference_slot(basis_[a].n - basis_[b].n);
  }

 private:
  ElasticProfile profile_;
  PlaneWaveBasis basis_;
  std::vector<Eigen::Vector3d> g3_;
  std::vector<Matrix6cd> c_;
  std::vector<Eigen::Matrix3cd> rho_;
  std::vector<Matrix63cd> s_;
};

QuadraticPencil elastic_pencil(const ElasticModel& model, const Eigen::Vector3d& k);

struct ElasticImpedance {
  double omega = 0.0;
  Eigen::Vector3d k = Eigen::Vector3d::Zero();
  std::size_t zero = 0;  // basis index of g = 0; rows 3*zero .. 3*zero+2

  Eigen::MatrixXcd Z;
  Eigen::MatrixXcd Z0;
  Eigen::MatrixXcd q;  // rows (g != 0, p), columns Voigt (ij)
  Eigen::MatrixXcd r;  // rows (g != 0, q), columns k
  Eigen::MatrixXcd w;  // rows (g != 0, i), columns k

  Eigen::Matrix3cd mean_Z;
  Matrix6cd mean_C;
  Eigen::Matrix3cd mean_rho;
  Matrix63cd mean_S;
};

ElasticImpedance assemble_elastic(const ElasticModel& model, double omega, const Eigen::Vector3d& k);

RestrictedGreen restricted_green(const ElasticImpedance& system, double threshold = kExceptionalRcond);

struct EffectiveParamsElastic {
  Matrix6cd C;
  Eigen::Matrix3cd rho;
  Matrix63cd S;
  double omega = 0.0;
  Eigen::Vector3d k = Eigen::Vector3d::Zero();
  ParamStatus status = ParamStatus::regular;
  double rcond = 1.0;

  cplx c(int i, int j, int k, int l) const { return C(voigt(i, j), voigt(k, l)); }
  cplx s(int i, int j, int k) const { return S(voigt(i, j), k); }
};

EffectiveParamsElastic effective_tensors(const ElasticImpedance& system, const RestrictedGreen& green);
EffectiveParamsElastic effective_tensors(const ElasticImpedance& system);

// Z_ik = C_ijkl k_j k_l - omega k_j (S_ijk + conj(S_kji)) - omega^2 rho_ik.
Eigen::Matrix3cd effective_impedance_matrix(const EffectiveParamsElastic& params);

// <G>^{-1} = <Z> - w^+ G_\0 w (3x3).
Eigen::Matrix3cd inverse_mean_green(const ElasticImpedance& system, const RestrictedGreen& green);

// Low-frequency expansion rho(omega) ~ mean + omega^2 coefficient at k = 0.
struct QuasistaticDensity {
  Eigen::Matrix3cd mean;
  Eigen::Matrix3cd coefficient;
  double omega = 0.0;
  Eigen::Matrix3cd value;
};

QuasistaticDensity quasistatic_density(const ElasticModel& model, double omega);

struct QuasistaticDensityScalar {
  double mean = 0.0;
  double coefficient = 0.0;
  double omega = 0.0;
  double value = 0.0;
};

QuasistaticDensityScalar quasistatic_density(const ScalarModel& model, double omega);

}  // namespace willis
