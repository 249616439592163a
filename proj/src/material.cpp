#include "willis/material.hpp"

#include <cmath>

#include "willis/errors.hpp"

namespace willis {

namespace {

bool hermitian(const Eigen::MatrixXcd& m) {
  return (m - m.adjoint()).norm() <= 1e-12 * std::max(1.0, m.norm());
}

bool positive_definite(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(m, Eigen::EigenvaluesOnly);
  return eig.info() == Eigen::Success && eig.eigenvalues().minCoeff() > 0.0;
}

}  // namespace

int voigt(int i, int j) {
  if (i == j) return i;
  const int s = i + j;
  return s == 3 ? 3 : (s == 2 ? 4 : 5);
}

ScalarPhase ScalarPhase::isotropic(std::string name, int dimension, double mu, double rho) {
  ScalarPhase p;
  p.name = std::move(name);
  p.mu = mu * Eigen::MatrixXcd::Identity(dimension, dimension);
  p.rho = rho;
  p.s = Eigen::VectorXcd::Zero(dimension);
  return p;
}

ScalarProfile::ScalarProfile(Lattice lattice, std::vector<ScalarPhase> phases, Geometry geometry)
    : lattice_(std::move(lattice)), phases_(std::move(phases)), geometry_(std::move(geometry)) {
  const int d = lattice_.dimension();
  if (phases_.empty()) throw InvalidProfile("profile has no phases");
  for (auto& p : phases_) {
    if (p.s.size() == 0) p.s = Eigen::VectorXcd::Zero(d);
    if (p.mu.rows() != d || p.mu.cols() != d || p.s.size() != d)
      throw InvalidProfile("phase '" + p.name + "' has fields of the wrong dimension");
    if (!hermitian(p.mu) || !positive_definite(p.mu))
      throw InvalidProfile("phase '" + p.name + "' stiffness must be Hermitian positive definite");
    if (!(p.rho > 0.0) || !std::isfinite(p.rho))
      throw InvalidProfile("phase '" + p.name + "' density must be positive");
  }
  validate_geometry(lattice_, geometry_, phases_.size());
}

ScalarProfile ScalarProfile::layered(const std::vector<double>& mu, const std::vector<double>& rho,
                                     const std::vector<double>& h) {
  if (mu.size() != rho.size() || mu.size() != h.size())
    throw InvalidProfile("layer property lists differ in length");
  std::vector<ScalarPhase> phases;
  LayerStack stack;
  double period = 0.0;
  for (std::size_t l = 0; l < mu.size(); ++l) {
    if (!(h[l] > 0.0)) throw InvalidProfile("layer thickness must be positive");
    phases.push_back(ScalarPhase::isotropic("L" + std::to_string(l + 1), 1, mu[l], rho[l]));
    stack.layers.push_back({l, h[l]});
    period += h[l];
  }
  return ScalarProfile(Lattice::line(period), std::move(phases), stack);
}

bool ScalarProfile::classical() const {
  for (const auto& p : phases_)
    if (p.s.norm() != 0.0 || p.mu.imag().norm() != 0.0) return false;
  return true;
}

ScalarFields fourier_coefficient(const ScalarProfile& profile, const MultiIndex& n) {
  const int d = profile.dimension();
  ScalarFields f{Eigen::MatrixXcd::Zero(d, d), 0.0, Eigen::VectorXcd::Zero(d)};
  for (std::size_t p = 0; p < profile.phases().size(); ++p) {
    const cplx chi = indicator_coefficient(profile.lattice(), profile.geometry(), p, n);
    const auto& phase = profile.phases()[p];
    f.mu += chi * phase.mu;
    f.rho += chi * phase.rho;
    f.s += chi * phase.s;
  }
  return f;
}

ScalarFields cell_average(const ScalarProfile& profile) {
  return fourier_coefficient(profile, {0, 0, 0});
}

ElasticPhase ElasticPhase::isotropic(std::string name, double lambda, double mu, double rho) {
  ElasticPhase p;
  p.name = std::move(name);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) p.c(i, j) = lambda + (i == j ? 2.0 * mu : 0.0);
  for (int i = 3; i < 6; ++i) p.c(i, i) = mu;
  p.rho = rho * Eigen::Matrix3cd::Identity();
  return p;
}

ElasticProfile::ElasticProfile(Lattice lattice, std::vector<ElasticPhase> phases, Geometry geometry)
    : lattice_(std::move(lattice)), phases_(std::move(phases)), geometry_(std::move(geometry)) {
  if (phases_.empty()) throw InvalidProfile("profile has no phases");
  // Energy form on symmetric strains: engineering shear slots carry sqrt(2).
  Eigen::Matrix<double, 6, 1> w;
  w << 1, 1, 1, std::sqrt(2.0), std::sqrt(2.0), std::sqrt(2.0);
  for (const auto& p : phases_) {
    const Eigen::MatrixXcd c = p.c;
    if (!hermitian(c)) throw InvalidProfile("phase '" + p.name + "' stiffness lacks major symmetry");
    const Eigen::MatrixXcd energy = w.asDiagonal() * c * w.asDiagonal();
    if (!positive_definite(energy))
      throw InvalidProfile("phase '" + p.name + "' stiffness must be positive definite");
    const Eigen::MatrixXcd rho = p.rho;
    if (!hermitian(rho) || !positive_definite(rho))
      throw InvalidProfile("phase '" + p.name + "' density must be Hermitian positive definite");
  }
  validate_geometry(lattice_, geometry_, phases_.size());
}

bool ElasticProfile::classical() const {
  for (const auto& p : phases_) {
    if (p.s.norm() != 0.0) return false;
    const cplx r = p.rho(0, 0);
    if (r.imag() != 0.0 || (p.rho - r * Eigen::Matrix3cd::Identity()).norm() != 0.0) return false;
  }
  return true;
}

}  // namespace willis
