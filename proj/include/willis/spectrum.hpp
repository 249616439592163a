#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "willis/hermitian.hpp"
#include "willis/pwe_elastic.hpp"
#include "willis/pwe_scalar.hpp"

namespace willis {

enum class PointClass { regular, exceptional_off_branch, zero_mean_bloch, near_double_point };

std::string to_string(PointClass c);

QuadraticPencil scalar_pencil(const ScalarModel& model, const Eigen::VectorXd& k);

struct Bands {
  std::vector<double> omega;    // ascending
  std::vector<bool> degenerate;  // within kDegeneracyTol of a neighbour
  bool none_found = false;
};

// Smallest nonnegative real roots of det Z(omega) = 0. Uses the
// Hermitian-definite pencil K v = omega^2 N v when the gyroscopic term
// vanishes, a companion linearization otherwise.
Bands solve_pencil(const QuadraticPencil& pencil, int n_branches);

struct BandOptions {
  bool polish = false;
};

Bands band_structure(const ScalarModel& model, const Eigen::VectorXd& k, int n_branches,
                     BandOptions options = {});
Bands band_structure(const ElasticModel& model, const Eigen::Vector3d& k, int n_branches);

// Newton step on <G>^{-1}(omega) with a central difference of 1e-7 omega.
// Returns the input unchanged when polishing does not reduce the residual.
double polish_root(const ScalarModel& model, double omega, const Eigen::VectorXd& k);

struct BlochBranchSet {
  std::vector<Eigen::VectorXd> k;
  std::vector<std::vector<double>> omega;       // [branch][sample]
  std::vector<std::vector<PointClass>> status;  // [branch][sample]

  int branches() const { return static_cast<int>(omega.size()); }
  std::size_t samples() const { return k.size(); }
};

struct TraceOptions {
  int threads = 1;
  bool polish = false;
  double threshold = kExceptionalRcond;
};

// Evenly spaced samples t * direction, t from start to stop inclusive.
std::vector<Eigen::VectorXd> k_line(double start, double stop, int count,
                                    const Eigen::VectorXd& direction);

BlochBranchSet trace_branches(const ScalarModel& model, const std::vector<Eigen::VectorXd>& k_grid,
                              int n_branches, TraceOptions options = {});
BlochBranchSet trace_branches(const ElasticModel& model, const std::vector<Eigen::VectorXd>& k_grid,
                              int n_branches, TraceOptions options = {});

// <G>^{-1}; zero on a Bloch branch.
cplx dispersion_residual(const ScalarModel& model, double omega, const Eigen::VectorXd& k);
// det <G>^{-1} for the vector case.
cplx dispersion_residual(const ElasticModel& model, double omega, const Eigen::Vector3d& k);

struct ExceptionalReport {
  double omega = 0.0;
  Eigen::VectorXd k;
  double rcond = 0.0;
  // <G>^{-1} (scalar) or det <G>^{-1} (elastic); NaN when G_\0 does not exist.
  cplx residual;
  // Eigenvalues of Z within kDegeneracyTol of zero, relative to the largest.
  int null_count = 0;
  // |<u_B>| / |u_B| of the Bloch mode when (omega, k) is on a branch, else NaN.
  double bloch_mean = 0.0;
  PointClass classification = PointClass::regular;
};

ExceptionalReport classify_point(const ScalarModel& model, double omega, const Eigen::VectorXd& k,
                                 double threshold = kExceptionalRcond);
ExceptionalReport classify_point(const ElasticModel& model, double omega, const Eigen::Vector3d& k,
                                 double threshold = kExceptionalRcond);

struct BranchSample {
  Eigen::VectorXd k;
  double omega = 0.0;
  PointClass status = PointClass::regular;
  std::optional<EffectiveParamsScalar> params;
};

// Effective parameters along one traced branch; samples whose tag is not
// regular, or whose restricted impedance is singular, carry no parameters.
std::vector<BranchSample> params_on_branch(const ScalarModel& model, const BlochBranchSet& set,
                                           int branch, int threads = 1);

}  // namespace willis
