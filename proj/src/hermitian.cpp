#include "willis/hermitian.hpp"

#include "willis/errors.hpp"

namespace willis {

HermitianFactor::HermitianFactor(const Eigen::MatrixXcd& a) {
  if (a.size() == 0) {
    rcond_ = 1.0;
    return;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(a);
  if (eig.info() != Eigen::Success) throw Error("Hermitian eigensolver failed to converge");
  vectors_ = eig.eigenvectors();
  values_ = eig.eigenvalues();
  const double largest = values_.cwiseAbs().maxCoeff();
  rcond_ = largest > 0.0 ? values_.cwiseAbs().minCoeff() / largest : 0.0;
}

Eigen::MatrixXcd HermitianFactor::solve(const Eigen::MatrixXcd& b) const {
  Eigen::MatrixXcd y = vectors_.adjoint() * b;
  y.array().colwise() /= values_.array().cast<std::complex<double>>();
  return vectors_ * y;
}

Eigen::MatrixXcd HermitianFactor::inverse() const {
  return vectors_ * values_.cwiseInverse().asDiagonal() * vectors_.adjoint();
}

RestrictedGreen::RestrictedGreen(const Eigen::MatrixXcd& z0, double omega, const Eigen::VectorXd& k,
                                 double threshold)
    : factor_(z0), omega_(omega), k_(k) {
  if (factor_.rcond() < threshold) throw ExceptionalPointError(omega, k, factor_.rcond());
}

Eigen::MatrixXcd RestrictedGreen::padded(std::size_t begin, std::size_t count) const {
  const Eigen::Index m = factor_.size();
  const Eigen::Index n = m + static_cast<Eigen::Index>(count);
  const Eigen::Index b = static_cast<Eigen::Index>(begin);
  const Eigen::MatrixXcd g = matrix();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  const Eigen::Index tail = m - b;
  out.topLeftCorner(b, b) = g.topLeftCorner(b, b);
  out.topRightCorner(b, tail) = g.topRightCorner(b, tail);
  out.bottomLeftCorner(tail, b) = g.bottomLeftCorner(tail, b);
  out.bottomRightCorner(tail, tail) = g.bottomRightCorner(tail, tail);
  return out;
}

Eigen::MatrixXcd remove_block(const Eigen::MatrixXcd& z, std::size_t begin, std::size_t count) {
  const Eigen::Index n = z.rows();
  const Eigen::Index b = static_cast<Eigen::Index>(begin);
  const Eigen::Index e = b + static_cast<Eigen::Index>(count);
  const Eigen::Index m = n - static_cast<Eigen::Index>(count);
  const Eigen::Index tail = n - e;
  Eigen::MatrixXcd out(m, m);
  out.topLeftCorner(b, b) = z.topLeftCorner(b, b);
  out.topRightCorner(b, tail) = z.topRightCorner(b, tail);
  out.bottomLeftCorner(tail, b) = z.bottomLeftCorner(tail, b);
  out.bottomRightCorner(tail, tail) = z.bottomRightCorner(tail, tail);
  return out;
}

Eigen::MatrixXcd remove_rows(const Eigen::MatrixXcd& v, std::size_t begin, std::size_t count) {
  const Eigen::Index b = static_cast<Eigen::Index>(begin);
  const Eigen::Index tail = v.rows() - b - static_cast<Eigen::Index>(count);
  Eigen::MatrixXcd out(b + tail, v.cols());
  out.topRows(b) = v.topRows(b);
  out.bottomRows(tail) = v.bottomRows(tail);
  return out;
}

Eigen::MatrixXcd QuadraticPencil::at(double omega) const {
  Eigen::MatrixXcd z = stiffness - omega * gyroscopic - (omega * omega) * mass;
  make_hermitian(z);
  return z;
}

void make_hermitian(Eigen::MatrixXcd& z) {
  z = (0.5 * (z + z.adjoint())).eval();
}

}  // namespace willis
