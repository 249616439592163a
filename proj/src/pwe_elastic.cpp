#include "willis/pwe_elastic.hpp"

#include <cmath>

#include "willis/errors.hpp"

namespace willis {

namespace {

Eigen::Index row_of(std::size_t a, std::size_t zero) {
  return static_cast<Eigen::Index>(3 * (a < zero ? a : a - 1));
}

// Smallest eigenvalue of K v = lambda N v, both restricted to g != 0.
double first_restricted_pole(const Eigen::MatrixXcd& k0, const Eigen::MatrixXcd& n0) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> eig(k0, n0, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw Error("restricted pencil eigensolve failed");
  return eig.eigenvalues().minCoeff();
}

}  // namespace

ElasticModel::ElasticModel(ElasticProfile profile, int truncation)
    : profile_(std::move(profile)), basis_(profile_.lattice(), truncation) {
  const PhaseIndicators chi(basis_, profile_.geometry(), profile_.phases().size());
  const auto& phases = profile_.phases();
  const int d = basis_.dimension();
  for (const auto& v : basis_.vectors()) {
    Eigen::Vector3d g = Eigen::Vector3d::Zero();
    g.head(d) = v.g;
    g3_.push_back(g);
  }
  const std::size_t slots = basis_.difference_count();
  c_.resize(slots);
  rho_.resize(slots);
  s_.resize(slots);
  for (std::size_t s = 0; s < slots; ++s) {
    c_[s] = chi.combine(s, Matrix6cd(Matrix6cd::Zero()), [&](std::size_t p) { return phases[p].c; });
    rho_[s] = chi.combine(s, Eigen::Matrix3cd(Eigen::Matrix3cd::Zero()),
                          [&](std::size_t p) { return phases[p].rho; });
    s_[s] = chi.combine(s, Matrix63cd(Matrix63cd::Zero()), [&](std::size_t p) { return phases[p].s; });
  }
}

QuadraticPencil elastic_pencil(const ElasticModel& model, const Eigen::Vector3d& k) {
  const auto n = static_cast<Eigen::Index>(model.unknowns());
  const std::size_t size = model.basis().size();
  QuadraticPencil pencil{Eigen::MatrixXcd::Zero(n, n), Eigen::MatrixXcd::Zero(n, n),
                         Eigen::MatrixXcd::Zero(n, n)};
  for (std::size_t a = 0; a < size; ++a) {
    const Eigen::Vector3d p = model.g(a) + k;
    for (std::size_t b = 0; b < size; ++b) {
      const Eigen::Vector3d pp = model.g(b) + k;
      const std::size_t s = model.slot(a, b);
      const std::size_t sr = model.slot(b, a);
      const Matrix6cd& c = model.C(s);
      const Matrix63cd& sab = model.S(s);
      const Matrix63cd& sba = model.S(sr);
      const auto ra = static_cast<Eigen::Index>(3 * a);
      const auto rb = static_cast<Eigen::Index>(3 * b);
      for (int i = 0; i < 3; ++i) {
        for (int kk = 0; kk < 3; ++kk) {
          cplx stiff = 0.0;
          cplx gyro = 0.0;
          for (int j = 0; j < 3; ++j) {
            const int ij = voigt(i, j);
            for (int l = 0; l < 3; ++l) stiff += p(j) * pp(l) * c(ij, voigt(kk, l));
            gyro += p(j) * sab(ij, kk) + pp(j) * std::conj(sba(voigt(kk, j), i));
          }
          pencil.stiffness(ra + i, rb + kk) = stiff;
          pencil.gyroscopic(ra + i, rb + kk) = gyro;
          pencil.mass(ra + i, rb + kk) = model.rho(s)(i, kk);
        }
      }
    }
  }
  make_hermitian(pencil.stiffness);
  make_hermitian(pencil.gyroscopic);
  make_hermitian(pencil.mass);
  return pencil;
}

ElasticImpedance assemble_elastic(const ElasticModel& model, double omega, const Eigen::Vector3d& k) {
  if (!(omega >= 0.0) || !std::isfinite(omega)) throw InvalidArgument("omega must be real and >= 0");
  if (!k.allFinite()) throw InvalidArgument("wave-vector must be finite");
  const std::size_t size = model.basis().size();
  const std::size_t zero = model.basis().zero_index();
  const auto rows = static_cast<Eigen::Index>(3 * (size - 1));

  ElasticImpedance sys;
  sys.omega = omega;
  sys.k = k;
  sys.zero = zero;
  sys.Z = elastic_pencil(model, k).at(omega);
  sys.Z0 = remove_block(sys.Z, 3 * zero, 3);

  sys.q.resize(rows, 6);
  sys.r.resize(rows, 3);
  sys.w.resize(rows, 3);
  for (std::size_t a = 0; a < size; ++a) {
    if (a == zero) continue;
    const Eigen::Vector3d p = model.g(a) + k;
    const Matrix6cd& c = model.C(model.slot(zero, a));
    const Matrix63cd& s_minus = model.S(model.slot(zero, a));
    const Matrix63cd& s_plus = model.S(model.slot(a, zero));
    const Eigen::Matrix3cd& rho = model.rho(model.slot(zero, a));
    const Eigen::Index row = row_of(a, zero);
    for (int m = 0; m < 3; ++m) {
      // q: conj of e^+ Q_(ij) at column (g, m)
      for (int pair = 0; pair < 6; ++pair) {
        cplx v = -omega * s_minus(pair, m);
        for (int l = 0; l < 3; ++l) v += c(pair, voigt(m, l)) * p(l);
        sys.q(row + m, pair) = std::conj(v);
      }
      // r: conj of e^+ R_k at column (g, m)
      for (int kk = 0; kk < 3; ++kk) {
        cplx v = omega * rho(kk, m);
        for (int j = 0; j < 3; ++j) v += p(j) * std::conj(s_plus(voigt(m, j), kk));
        sys.r(row + m, kk) = std::conj(v);
      }
    }
  }
  for (int kk = 0; kk < 3; ++kk) {
    sys.w.col(kk) = -omega * sys.r.col(kk);
    for (int j = 0; j < 3; ++j) sys.w.col(kk) += k(j) * sys.q.col(voigt(kk, j));
  }

  const std::size_t origin = model.slot(zero, zero);
  sys.mean_C = model.C(origin);
  sys.mean_rho = model.rho(origin);
  sys.mean_S = model.S(origin);
  const auto z3 = static_cast<Eigen::Index>(3 * zero);
  sys.mean_Z = sys.Z.block(z3, z3, 3, 3);
  return sys;
}

RestrictedGreen restricted_green(const ElasticImpedance& system, double threshold) {
  Eigen::VectorXd k = system.k;
  return RestrictedGreen(system.Z0, system.omega, k, threshold);
}

EffectiveParamsElastic effective_tensors(const ElasticImpedance& sys, const RestrictedGreen& green) {
  Eigen::MatrixXcd rhs(sys.q.rows(), 9);
  rhs.leftCols(6) = sys.q;
  rhs.rightCols(3) = sys.r;
  const Eigen::MatrixXcd x = green.solve(rhs);
  EffectiveParamsElastic out;
  out.omega = sys.omega;
  out.k = sys.k;
  out.rcond = green.rcond();
  out.status = green.near_exceptional() ? ParamStatus::near_exceptional : ParamStatus::regular;
  out.C = sys.mean_C - sys.q.adjoint() * x.leftCols(6);
  out.S = sys.mean_S - sys.q.adjoint() * x.rightCols(3);
  out.rho = sys.mean_rho + sys.r.adjoint() * x.rightCols(3);
  return out;
}

EffectiveParamsElastic effective_tensors(const ElasticImpedance& sys) {
  return effective_tensors(sys, restricted_green(sys));
}

Eigen::Matrix3cd effective_impedance_matrix(const EffectiveParamsElastic& p) {
  Eigen::Matrix3cd z = -(p.omega * p.omega) * p.rho;
  for (int i = 0; i < 3; ++i)
    for (int kk = 0; kk < 3; ++kk)
      for (int j = 0; j < 3; ++j) {
        for (int l = 0; l < 3; ++l) z(i, kk) += p.c(i, j, kk, l) * p.k(j) * p.k(l);
        z(i, kk) -= p.omega * p.k(j) * (p.s(i, j, kk) + std::conj(p.s(kk, j, i)));
      }
  return z;
}

Eigen::Matrix3cd inverse_mean_green(const ElasticImpedance& sys, const RestrictedGreen& green) {
  return sys.mean_Z - sys.w.adjoint() * green.solve(sys.w);
}

QuasistaticDensity quasistatic_density(const ElasticModel& model, double omega) {
  if (!model.profile().classical())
    throw UnsupportedError("quasistatic density needs S = 0 and scalar real density");
  const std::size_t size = model.basis().size();
  const std::size_t zero = model.basis().zero_index();
  const auto pencil = elastic_pencil(model, Eigen::Vector3d::Zero());
  const Eigen::MatrixXcd k0 = remove_block(pencil.stiffness, 3 * zero, 3);
  const Eigen::MatrixXcd n0 = remove_block(pencil.mass, 3 * zero, 3);
  if (omega * omega >= first_restricted_pole(k0, n0))
    throw InvalidArgument("omega must lie below the first restricted resonance");

  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(k0.rows(), 3);
  for (std::size_t a = 0; a < size; ++a) {
    if (a == zero) continue;
    x.block(row_of(a, zero), 0, 3, 3) = model.rho(model.slot(a, zero));
  }
  const HermitianFactor static_green(k0);
  QuasistaticDensity out;
  out.mean = model.rho(model.slot(zero, zero));
  out.coefficient = x.adjoint() * static_green.solve(x);
  out.omega = omega;
  out.value = out.mean + omega * omega * out.coefficient;
  return out;
}

QuasistaticDensityScalar quasistatic_density(const ScalarModel& model, double omega) {
  if (!model.profile().classical())
    throw UnsupportedError("quasistatic density needs a classical profile");
  const auto& mat = *model.material();
  const auto sys = assemble_impedance(assemble_operators(model, 0.0, Eigen::VectorXd::Zero(model.dimension())));
  const Eigen::MatrixXcd n0 = remove_block(mat.N, mat.zero, 1);
  if (omega * omega >= first_restricted_pole(sys.Z0, n0))
    throw InvalidArgument("omega must lie below the first restricted resonance");
  const Eigen::VectorXcd x = remove_rows(mat.N.col(static_cast<Eigen::Index>(mat.zero)), mat.zero, 1);
  const HermitianFactor static_green(sys.Z0);
  QuasistaticDensityScalar out;
  out.mean = mat.N(static_cast<Eigen::Index>(mat.zero), static_cast<Eigen::Index>(mat.zero)).real();
  out.coefficient = x.dot(static_green.solve(x).col(0)).real();
  out.omega = omega;
  out.value = out.mean + omega * omega * out.coefficient;
  return out;
}

}  // namespace willis
