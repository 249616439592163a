#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace willis {

// Integer coordinates of a reciprocal vector in the basis 2*pi*b_j. Entries
// beyond the lattice dimension are zero.
using MultiIndex = std::array<int, 3>;

// Columns b_j of (A^{-1})^T, so that a_j . b_k = delta_jk.
Eigen::MatrixXd reciprocal_basis(const Eigen::MatrixXd& translations);

class Lattice {
 public:
  explicit Lattice(Eigen::MatrixXd translations);

  static Lattice line(double period);
  static Lattice cubic(int dimension, double edge);

  int dimension() const { return static_cast<int>(a_.cols()); }
  const Eigen::MatrixXd& translations() const { return a_; }
  const Eigen::MatrixXd& reciprocal() const { return b_; }
  double volume() const { return volume_; }

  // g = 2*pi * sum_j n_j b_j, of length dimension().
  Eigen::VectorXd wavevector(const MultiIndex& n) const;
  // Fractional coordinates t = A^{-1} x, so that g.x = 2*pi n.t.
  Eigen::VectorXd fractional(const Eigen::VectorXd& x) const;

 private:
  Eigen::MatrixXd a_;
  Eigen::MatrixXd b_;
  double volume_;
};

struct ReciprocalVector {
  MultiIndex n{0, 0, 0};
  Eigen::VectorXd g;
};

// Cubic multi-index box |n_j| <= N in lexicographic order (first index
// slowest). Symmetric enumeration puts g = 0 exactly in the middle.
class PlaneWaveBasis {
 public:
  PlaneWaveBasis(const Lattice& lattice, int truncation);

  const Lattice& lattice() const { return lattice_; }
  int dimension() const { return lattice_.dimension(); }
  int truncation() const { return truncation_; }
  std::size_t size() const { return vectors_.size(); }
  std::size_t zero_index() const { return zero_; }

  const ReciprocalVector& operator[](std::size_t i) const { return vectors_[i]; }
  const std::vector<ReciprocalVector>& vectors() const { return vectors_; }

  // Position of n in the basis, or size() if n lies outside the box.
  std::size_t find(const MultiIndex& n) const;

  // Flat index of a difference n - n' in the doubled box [-2N, 2N]^d.
  std::size_t difference_slot(const MultiIndex& m) const;
  std::size_t difference_count() const;
  MultiIndex difference_index(std::size_t slot) const;

 private:
  Lattice lattice_;
  int truncation_;
  std::vector<ReciprocalVector> vectors_;
  std::size_t zero_;
};

PlaneWaveBasis build_basis(const Lattice& lattice, int truncation);

inline MultiIndex operator-(const MultiIndex& a, const MultiIndex& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline MultiIndex operator-(const MultiIndex& a) { return {-a[0], -a[1], -a[2]}; }

}  // namespace willis
