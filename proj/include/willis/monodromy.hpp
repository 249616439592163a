#pragma once

#include <vector>

#include <Eigen/Dense>

#include "willis/material.hpp"

namespace willis {

struct ScalarLayer {
  double mu = 1.0;
  double rho = 1.0;
  double thickness = 1.0;
};

// Layers of a classical 1D layered profile in stacking order.
std::vector<ScalarLayer> layers_of(const ScalarProfile& profile);

// Propagator of (u, sigma) across one homogeneous layer, sigma = mu u'.
Eigen::Matrix2cd layer_propagator(double mu, double rho, double h, double omega);

struct Monodromy {
  Eigen::Matrix2cd M;
  double omega = 0.0;
  double y0 = 0.0;
  std::vector<ScalarLayer> ordering;  // layers traversed from y0 to y0 + T
};

Monodromy monodromy_matrix(const ScalarProfile& profile, double omega, double y0);

// tr M / 2 = cos(kT) on a Bloch branch; |.| <= 1 in a passband.
double mm_dispersion(const ScalarProfile& profile, double omega);

struct MMEffectiveParams {
  cplx mu;
  cplx rho;
  cplx s;
  int log_branch = 0;
  double y0 = 0.0;
  double omega = 0.0;
  double k = 0.0;
  double kappa = 0.0;     // Bloch exponent actually used, eigenvalues of B are +-i kappa
  double residual = 0.0;  // |B22 - i omega conj(S)/mu|
  Eigen::Matrix2cd generator;
};

// Reads a uniform Willis medium off B = log(M)/T. The sheet of the logarithm
// is fixed by k folded to [-pi/T, pi/T] plus 2 pi log_branch / T.
MMEffectiveParams mm_effective_params(const ScalarProfile& profile, double omega, double k, double y0,
                                      int log_branch = 0);

// Exact Bloch frequency of 0-based branch n at wavenumber k, bracketed on a
// fine scan of tr M / 2 - cos(kT) and refined to machine precision.
double mm_branch_frequency(const ScalarProfile& profile, double k, int branch);

}  // namespace willis
