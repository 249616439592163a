#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "willis/material.hpp"

namespace willis::testing {

// The three-layer benchmark cell.
inline ScalarProfile table1(double rho3 = 0.5) {
  return ScalarProfile::layered({1.0, 7.0, 1.0 / 3.0}, {1.0, 2.0, rho3}, {0.37, 0.313, 0.317});
}

// Same stiffnesses, density 1 everywhere.
inline ScalarProfile constant_rho() {
  return ScalarProfile::layered({1.0, 7.0, 1.0 / 3.0}, {1.0, 1.0, 1.0}, {0.37, 0.313, 0.317});
}

// rho_1 = rho_2 = 1 and rho_3 = 1 + delta: constant density as delta -> 0.
inline ScalarProfile density_contrast(double delta) {
  return ScalarProfile::layered({1.0, 7.0, 1.0 / 3.0}, {1.0, 1.0, 1.0 + delta}, {0.37, 0.313, 0.317});
}

inline ScalarProfile uniform1d() { return ScalarProfile::layered({1.0}, {1.0}, {1.0}); }

inline Eigen::VectorXd vec1(double k) {
  Eigen::VectorXd v(1);
  v << k;
  return v;
}

inline double rel(std::complex<double> a, std::complex<double> b) {
  return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

template <class A, class B>
double rel_norm(const A& a, const B& b) {
  return (a - b).norm() / std::max(1.0, std::max(a.norm(), b.norm()));
}

}  // namespace willis::testing
