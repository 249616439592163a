#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace willis {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidLattice : public Error { using Error::Error; };
class InvalidProfile : public Error { using Error::Error; };
class InvalidArgument : public Error { using Error::Error; };
class ResolutionError : public Error { using Error::Error; };
class AssemblyError : public Error { using Error::Error; };
class UnsupportedError : public Error { using Error::Error; };
class NoRealWavenumber : public Error { using Error::Error; };
class NonDiagonalizable : public Error { using Error::Error; };

// Raised when the restricted impedance is numerically singular. Carries the
// offending point so callers can tag it instead of aborting a sweep.
class ExceptionalPointError : public Error {
 public:
  ExceptionalPointError(double omega, Eigen::VectorXd k, double rcond);
  double omega() const { return omega_; }
  const Eigen::VectorXd& k() const { return k_; }
  double rcond() const { return rcond_; }

 private:
  double omega_;
  Eigen::VectorXd k_;
  double rcond_;
};

// Raised when the full impedance is singular, i.e. (omega, k) sits on a
// Bloch branch and the unregularized route has no inverse to work with.
class OnBranchError : public Error {
 public:
  OnBranchError(double omega, Eigen::VectorXd k, double rcond);
  double omega() const { return omega_; }
  const Eigen::VectorXd& k() const { return k_; }
  double rcond() const { return rcond_; }

 private:
  double omega_;
  Eigen::VectorXd k_;
  double rcond_;
};

}  // namespace willis
