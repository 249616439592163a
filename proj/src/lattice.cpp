#include "willis/lattice.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "willis/errors.hpp"

namespace willis {

Eigen::MatrixXd reciprocal_basis(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() < 1 || a.rows() > 3)
    throw InvalidLattice("translation matrix must be square with dimension 1..3");
  double scale = 1.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) scale *= a.col(j).norm();
  const double det = a.determinant();
  if (!(scale > 0.0) || !std::isfinite(det) || std::abs(det) <= 1e-12 * scale)
    throw InvalidLattice("translation vectors are linearly dependent");
  return a.inverse().transpose();
}

Lattice::Lattice(Eigen::MatrixXd translations)
    : a_(std::move(translations)), b_(reciprocal_basis(a_)), volume_(std::abs(a_.determinant())) {}

Lattice Lattice::line(double period) {
  Eigen::MatrixXd a(1, 1);
  a(0, 0) = period;
  return Lattice(a);
}

Lattice Lattice::cubic(int dimension, double edge) {
  if (dimension < 1 || dimension > 3) throw InvalidLattice("dimension must be 1, 2 or 3");
  return Lattice(edge * Eigen::MatrixXd::Identity(dimension, dimension));
}

Eigen::VectorXd Lattice::wavevector(const MultiIndex& n) const {
  Eigen::VectorXd m(dimension());
  for (int j = 0; j < dimension(); ++j) m(j) = n[j];
  return 2.0 * std::numbers::pi * (b_ * m);
}

Eigen::VectorXd Lattice::fractional(const Eigen::VectorXd& x) const {
  return b_.transpose() * x;
}

PlaneWaveBasis::PlaneWaveBasis(const Lattice& lattice, int truncation)
    : lattice_(lattice), truncation_(truncation) {
  if (truncation < 1) throw InvalidArgument("truncation N must be >= 1");
  const int d = lattice.dimension();
  const int side = 2 * truncation + 1;
  std::size_t count = 1;
  for (int j = 0; j < d; ++j) count *= side;
  vectors_.reserve(count);
  for (std::size_t flat = 0; flat < count; ++flat) {
    MultiIndex n{0, 0, 0};
    std::size_t rest = flat;
    for (int j = d - 1; j >= 0; --j) {
      n[j] = static_cast<int>(rest % side) - truncation;
      rest /= side;
    }
    vectors_.push_back({n, lattice.wavevector(n)});
  }
  zero_ = count / 2;
}

std::size_t PlaneWaveBasis::find(const MultiIndex& n) const {
  const int d = dimension();
  const int side = 2 * truncation_ + 1;
  std::size_t flat = 0;
  for (int j = 0; j < d; ++j) {
    if (std::abs(n[j]) > truncation_) return size();
    flat = flat * side + static_cast<std::size_t>(n[j] + truncation_);
  }
  for (int j = d; j < 3; ++j)
    if (n[j] != 0) return size();
  return flat;
}

std::size_t PlaneWaveBasis::difference_count() const {
  std::size_t count = 1;
  for (int j = 0; j < dimension(); ++j) count *= 4 * truncation_ + 1;
  return count;
}

std::size_t PlaneWaveBasis::difference_slot(const MultiIndex& m) const {
  const int side = 4 * truncation_ + 1;
  std::size_t flat = 0;
  for (int j = 0; j < dimension(); ++j) {
    if (std::abs(m[j]) > 2 * truncation_)
      throw AssemblyError("difference vector outside the coefficient table");
    flat = flat * side + static_cast<std::size_t>(m[j] + 2 * truncation_);
  }
  return flat;
}

MultiIndex PlaneWaveBasis::difference_index(std::size_t slot) const {
  const int side = 4 * truncation_ + 1;
  MultiIndex m{0, 0, 0};
  for (int j = dimension() - 1; j >= 0; --j) {
    m[j] = static_cast<int>(slot % side) - 2 * truncation_;
    slot /= side;
  }
  return m;
}

PlaneWaveBasis build_basis(const Lattice& lattice, int truncation) {
  return PlaneWaveBasis(lattice, truncation);
}

}  // namespace willis
