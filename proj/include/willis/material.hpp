#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "willis/fourier.hpp"
#include "willis/lattice.hpp"

namespace willis {

// Constituent of a scalar (antiplane) cell: d x d shear stiffness, density and
// the constituent's own Willis coupling, which is zero for classical media.
struct ScalarPhase {
  std::string name;
  Eigen::MatrixXcd mu;
  double rho = 1.0;
  Eigen::VectorXcd s;

  static ScalarPhase isotropic(std::string name, int dimension, double mu, double rho);
};

class ScalarProfile {
 public:
  ScalarProfile(Lattice lattice, std::vector<ScalarPhase> phases, Geometry geometry);

  // 1D layered cell of period sum(h); phases listed in stacking order.
  static ScalarProfile layered(const std::vector<double>& mu, const std::vector<double>& rho,
                               const std::vector<double>& h);

  const Lattice& lattice() const { return lattice_; }
  int dimension() const { return lattice_.dimension(); }
  const std::vector<ScalarPhase>& phases() const { return phases_; }
  const Geometry& geometry() const { return geometry_; }

  // S = 0 and real stiffness in every phase.
  bool classical() const;

 private:
  Lattice lattice_;
  std::vector<ScalarPhase> phases_;
  Geometry geometry_;
};

struct ScalarFields {
  Eigen::MatrixXcd mu;
  cplx rho;
  Eigen::VectorXcd s;
};

ScalarFields fourier_coefficient(const ScalarProfile& profile, const MultiIndex& n);
ScalarFields cell_average(const ScalarProfile& profile);

using Matrix6cd = Eigen::Matrix<cplx, 6, 6>;
using Matrix63cd = Eigen::Matrix<cplx, 6, 3>;

// Voigt slot of the symmetric pair (i, j): 11 22 33 23 13 12.
int voigt(int i, int j);

// Elastic constituent. C is stored 6x6 with the Hermitian major symmetry
// C_ijkl = conj(C_klij); S_ijk = S_jik is stored with (ij) in the Voigt row.
struct ElasticPhase {
  std::string name;
  Matrix6cd c = Matrix6cd::Zero();
  Eigen::Matrix3cd rho = Eigen::Matrix3cd::Identity();
  Matrix63cd s = Matrix63cd::Zero();

  static ElasticPhase isotropic(std::string name, double lambda, double mu, double rho);

  cplx C(int i, int j, int k, int l) const { return c(voigt(i, j), voigt(k, l)); }
  cplx S(int i, int j, int k) const { return s(voigt(i, j), k); }
};

class ElasticProfile {
 public:
  ElasticProfile(Lattice lattice, std::vector<ElasticPhase> phases, Geometry geometry);

  const Lattice& lattice() const { return lattice_; }
  int dimension() const { return lattice_.dimension(); }
  const std::vector<ElasticPhase>& phases() const { return phases_; }
  const Geometry& geometry() const { return geometry_; }

  // S = 0 and density a real multiple of the identity in every phase.
  bool classical() const;

 private:
  Lattice lattice_;
  std::vector<ElasticPhase> phases_;
  Geometry geometry_;
};

}  // namespace willis
