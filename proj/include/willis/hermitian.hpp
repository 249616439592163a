#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace willis {

// Below this reciprocal condition number the restricted impedance counts as
// singular and (omega, k) is treated as an exceptional point.
inline constexpr double kExceptionalRcond = 1e-10;
// Results are still returned above the threshold but tagged near-exceptional
// inside this warning band.
inline constexpr double kNearExceptionalRcond = 1e-8;
// Relative gap under which two eigenvalues are taken as degenerate.
inline constexpr double kDegeneracyTol = 1e-8;

// Spectral factorization A = V diag(lambda) V^+ of a Hermitian matrix. Solves
// go through the factors, so A^{-1} is Hermitian by construction and the
// 2-norm condition number comes for free.
class HermitianFactor {
 public:
  explicit HermitianFactor(const Eigen::MatrixXcd& a);

  Eigen::Index size() const { return values_.size(); }
  const Eigen::VectorXd& eigenvalues() const { return values_; }
  const Eigen::MatrixXcd& eigenvectors() const { return vectors_; }
  double rcond() const { return rcond_; }

  Eigen::MatrixXcd solve(const Eigen::MatrixXcd& b) const;
  Eigen::MatrixXcd inverse() const;

 private:
  Eigen::MatrixXcd vectors_;
  Eigen::VectorXd values_;
  double rcond_ = 0.0;
};

// G_\0 = Z_\0^{-1}. Refuses to exist below the exceptional threshold.
class RestrictedGreen {
 public:
  RestrictedGreen(const Eigen::MatrixXcd& z0, double omega, const Eigen::VectorXd& k,
                  double threshold = kExceptionalRcond);

  double rcond() const { return factor_.rcond(); }
  double omega() const { return omega_; }
  const Eigen::VectorXd& k() const { return k_; }
  bool near_exceptional() const { return factor_.rcond() < kNearExceptionalRcond; }

  Eigen::MatrixXcd solve(const Eigen::MatrixXcd& b) const { return factor_.solve(b); }
  Eigen::MatrixXcd matrix() const { return factor_.inverse(); }
  // G_\0 embedded in the full index space with zero rows/columns at `removed`
  // (each removed index is one deleted row and column of the full matrix).
  Eigen::MatrixXcd padded(std::size_t removed_begin, std::size_t removed_count) const;

 private:
  HermitianFactor factor_;
  double omega_;
  Eigen::VectorXd k_;
};

// Delete `count` consecutive rows and columns starting at `begin`.
Eigen::MatrixXcd remove_block(const Eigen::MatrixXcd& z, std::size_t begin, std::size_t count);
Eigen::MatrixXcd remove_rows(const Eigen::MatrixXcd& v, std::size_t begin, std::size_t count);

// Z(omega) = K - omega B - omega^2 N with K, B, N Hermitian and N > 0.
struct QuadraticPencil {
  Eigen::MatrixXcd stiffness;
  Eigen::MatrixXcd gyroscopic;
  Eigen::MatrixXcd mass;

  Eigen::MatrixXcd at(double omega) const;
  bool gyroscopic_zero() const { return gyroscopic.norm() == 0.0; }
};

// Z <- (Z + Z^+)/2.
void make_hermitian(Eigen::MatrixXcd& z);

}  // namespace willis
