#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "willis/hermitian.hpp"
#include "willis/lattice.hpp"
#include "willis/material.hpp"

namespace willis {

// How products of discontinuous fields are truncated. `laurent` takes the
// plain Toeplitz matrices of mu, rho, S. `inverse` builds the stiffness as the
// inverse of the Toeplitz matrix of 1/mu, which is the product rule that
// converges for layered media (1D only). `automatic` picks inverse in 1D.
enum class FactorizationRule { automatic, laurent, inverse };

// Operator blocks that do not depend on (omega, k).
struct ScalarMaterialOperators {
  int dimension = 1;
  std::size_t size = 0;
  std::size_t zero = 0;
  FactorizationRule rule = FactorizationRule::laurent;
  std::vector<Eigen::MatrixXcd> M;  // M[j * d + l]
  std::vector<Eigen::MatrixXcd> V;
  Eigen::MatrixXcd N;

  const Eigen::MatrixXcd& m(int j, int l) const { return M[j * dimension + l]; }
};

class ScalarModel {
 public:
  ScalarModel(ScalarProfile profile, int truncation,
              FactorizationRule rule = FactorizationRule::automatic);

  const ScalarProfile& profile() const { return profile_; }
  const PlaneWaveBasis& basis() const { return basis_; }
  int dimension() const { return profile_.dimension(); }
  FactorizationRule rule() const { return material_->rule; }
  const std::shared_ptr<const ScalarMaterialOperators>& material() const { return material_; }

 private:
  ScalarProfile profile_;
  PlaneWaveBasis basis_;
  std::shared_ptr<const ScalarMaterialOperators> material_;
};

struct ScalarOperators {
  std::shared_ptr<const ScalarMaterialOperators> material;
  Eigen::MatrixXd D;  // D(g, l) = g_l + k_l
  double omega = 0.0;
  Eigen::VectorXd k;

  const Eigen::MatrixXcd& M(int j, int l) const { return material->m(j, l); }
  const Eigen::MatrixXcd& V(int l) const { return material->V[l]; }
  const Eigen::MatrixXcd& N() const { return material->N; }
};

ScalarOperators assemble_operators(const ScalarModel& model, double omega, const Eigen::VectorXd& k);

struct ImpedanceSystem {
  double omega = 0.0;
  Eigen::VectorXd k;
  int dimension = 1;
  std::size_t zero = 0;

  Eigen::MatrixXcd Z;
  Eigen::MatrixXcd Z0;
  // Rows e^+ Q_j and e^+ R over the full basis, stored as columns. These are
  // all that the averaged response needs from Q and R.
  Eigen::MatrixXcd q_row;
  Eigen::VectorXcd r_row;
  // Over g != 0.
  Eigen::MatrixXcd q;  // column j is q_j
  Eigen::VectorXcd r;
  Eigen::VectorXcd w;

  cplx mean_Z;
  Eigen::MatrixXcd mean_mu;
  double mean_rho = 0.0;
  Eigen::VectorXcd mean_s;
};

ImpedanceSystem assemble_impedance(const ScalarOperators& ops);

RestrictedGreen restricted_green(const ImpedanceSystem& system, double threshold = kExceptionalRcond);

enum class ParamStatus { regular, near_exceptional };

struct EffectiveParamsScalar {
  Eigen::MatrixXcd mu;
  double rho = 0.0;
  Eigen::VectorXcd s;
  double omega = 0.0;
  Eigen::VectorXd k;
  ParamStatus status = ParamStatus::regular;
  double rcond = 1.0;
  // Imaginary part dropped from rho; kept for diagnostics.
  double rho_imag = 0.0;
};

EffectiveParamsScalar effective_params(const ImpedanceSystem& system, const RestrictedGreen& green);

// <G>^{-1} = <Z> - w^+ G_\0 w.
cplx inverse_mean_green(const ImpedanceSystem& system, const RestrictedGreen& green);

// v = e - G_\0 w over the full basis.
Eigen::VectorXcd bloch_mode(const ImpedanceSystem& system, const RestrictedGreen& green);

// k.mu k - omega k.(S + S*) - omega^2 rho.
cplx effective_impedance(const EffectiveParamsScalar& params);

// Full G = Z^{-1} through an LU factorization.
class FullGreen {
 public:
  FullGreen(const ImpedanceSystem& system, double threshold = kExceptionalRcond);
  double rcond() const { return rcond_; }
  Eigen::MatrixXcd solve(const Eigen::MatrixXcd& b) const { return lu_.solve(b); }
  Eigen::MatrixXcd matrix() const { return lu_.inverse(); }

 private:
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
  double rcond_;
};

// The e-projections of the averaged forced response.
struct AveragedCoefficients {
  cplx a;                // e^+ G e
  cplx b;                // e^+ G R^+ e
  Eigen::VectorXcd beta;   // e^+ Q_j G e
  Eigen::VectorXcd alpha;  // <S_j> - e^+ Q_j G R^+ e
  Eigen::MatrixXcd A;      // <mu_jl> - e^+ Q_j G Q_l^+ e
  cplx rgr;              // e^+ R G R^+ e
};

AveragedCoefficients averaged_coefficients(const ImpedanceSystem& system, const FullGreen& green);

struct ForcedResponse {
  cplx u;
  Eigen::VectorXcd sigma;
  cplx p;
  AveragedCoefficients coefficients;
};

ForcedResponse forced_response(const ImpedanceSystem& system, const FullGreen& green, cplx f,
                               const Eigen::VectorXcd& gamma);

// Effective parameters through the full Green's function, without deleting
// the g = 0 row. Breaks down on Bloch branches.
EffectiveParamsScalar effective_params_unregularized(const ImpedanceSystem& system);

// assemble -> restrict -> regularized parameters in one call.
EffectiveParamsScalar effective_params_at(const ScalarModel& model, double omega,
                                          const Eigen::VectorXd& k);

}  // namespace willis
