#include "willis/pwe_scalar.hpp"

#include <cmath>

#include "willis/errors.hpp"

namespace willis {

namespace {

using Getter = std::function<cplx(const ScalarPhase&)>;

// Toeplitz matrix [[h]][g, g'] = h^(g - g') of a per-phase scalar field.
Eigen::MatrixXcd toeplitz(const PlaneWaveBasis& basis, const PhaseIndicators& chi,
                          const std::vector<ScalarPhase>& phases, const Getter& value) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  std::vector<cplx> per_phase;
  for (const auto& p : phases) per_phase.push_back(value(p));
  std::vector<cplx> coeff(basis.difference_count());
  for (std::size_t s = 0; s < coeff.size(); ++s)
    coeff[s] = chi.combine(s, cplx(0.0), [&](std::size_t p) { return per_phase[p]; });
  Eigen::MatrixXcd t(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      t(a, b) = coeff[basis.difference_slot(basis[a].n - basis[b].n)];
  return t;
}

std::shared_ptr<const ScalarMaterialOperators> build_material(const ScalarProfile& profile,
                                                              const PlaneWaveBasis& basis,
                                                              FactorizationRule rule) {
  const int d = profile.dimension();
  if (rule == FactorizationRule::automatic)
    rule = d == 1 ? FactorizationRule::inverse : FactorizationRule::laurent;
  if (rule == FactorizationRule::inverse && d != 1)
    throw UnsupportedError("the inverse factorization rule is implemented for 1D cells only");

  const PhaseIndicators chi(basis, profile.geometry(), profile.phases().size());
  const auto& phases = profile.phases();
  auto ops = std::make_shared<ScalarMaterialOperators>();
  ops->dimension = d;
  ops->size = basis.size();
  ops->zero = basis.zero_index();
  ops->rule = rule;

  if (rule == FactorizationRule::laurent) {
    for (int j = 0; j < d; ++j)
      for (int l = 0; l < d; ++l)
        ops->M.push_back(toeplitz(basis, chi, phases, [j, l](const ScalarPhase& p) { return p.mu(j, l); }));
    for (int l = 0; l < d; ++l)
      ops->V.push_back(toeplitz(basis, chi, phases, [l](const ScalarPhase& p) { return p.s(l); }));
    ops->N = toeplitz(basis, chi, phases, [](const ScalarPhase& p) { return cplx(p.rho); });
  } else {
    // sigma/mu and u are continuous across interfaces, so products with 1/mu
    // are the ones that can be truncated safely:
    //   M = [[1/mu]]^{-1},  V = M [[S/mu]],  N = [[rho + |S|^2/mu]] - [[S*/mu]] M [[S/mu]].
    auto mu = [](const ScalarPhase& p) { return p.mu(0, 0).real(); };
    const Eigen::MatrixXcd compliance =
        toeplitz(basis, chi, phases, [&](const ScalarPhase& p) { return cplx(1.0 / mu(p)); });
    const Eigen::MatrixXcd s_over_mu =
        toeplitz(basis, chi, phases, [&](const ScalarPhase& p) { return p.s(0) / mu(p); });
    const Eigen::MatrixXcd rho_total = toeplitz(basis, chi, phases, [&](const ScalarPhase& p) {
      return cplx(p.rho + std::norm(p.s(0)) / mu(p));
    });
    Eigen::LLT<Eigen::MatrixXcd> llt(compliance);
    if (llt.info() != Eigen::Success) throw AssemblyError("compliance matrix is not positive definite");
    Eigen::MatrixXcd m = llt.solve(Eigen::MatrixXcd::Identity(compliance.rows(), compliance.cols()));
    make_hermitian(m);
    Eigen::MatrixXcd v = m * s_over_mu;
    Eigen::MatrixXcd nn = rho_total - s_over_mu.adjoint() * v;
    make_hermitian(nn);
    ops->M.push_back(std::move(m));
    ops->V.push_back(std::move(v));
    ops->N = std::move(nn);
  }
  return ops;
}

}  // namespace

ScalarModel::ScalarModel(ScalarProfile profile, int truncation, FactorizationRule rule)
    : profile_(std::move(profile)),
      basis_(profile_.lattice(), truncation),
      material_(build_material(profile_, basis_, rule)) {}

ScalarOperators assemble_operators(const ScalarModel& model, double omega, const Eigen::VectorXd& k) {
  const int d = model.dimension();
  if (k.size() != d) throw InvalidArgument("wave-vector dimension does not match the lattice");
  if (!(omega >= 0.0) || !std::isfinite(omega)) throw InvalidArgument("omega must be real and >= 0");
  if (!k.allFinite()) throw InvalidArgument("wave-vector must be finite");
  ScalarOperators ops;
  ops.material = model.material();
  ops.omega = omega;
  ops.k = k;
  const auto& basis = model.basis();
  ops.D.resize(static_cast<Eigen::Index>(basis.size()), d);
  for (std::size_t i = 0; i < basis.size(); ++i)
    ops.D.row(static_cast<Eigen::Index>(i)) = (basis[i].g + k).transpose();
  return ops;
}

ImpedanceSystem assemble_impedance(const ScalarOperators& ops) {
  const int d = ops.material->dimension;
  const auto n = static_cast<Eigen::Index>(ops.material->size);
  const auto z = static_cast<Eigen::Index>(ops.material->zero);
  const double w = ops.omega;

  ImpedanceSystem sys;
  sys.omega = w;
  sys.k = ops.k;
  sys.dimension = d;
  sys.zero = ops.material->zero;

  // Z = D_j M_jl D_l - w (V_j^+ D_j + D_j V_j) - w^2 N
  sys.Z = -(w * w) * ops.N();
  for (int j = 0; j < d; ++j) {
    const Eigen::VectorXcd pj = ops.D.col(j).cast<cplx>();
    for (int l = 0; l < d; ++l) {
      const Eigen::VectorXcd pl = ops.D.col(l).cast<cplx>();
      sys.Z.noalias() += pj.asDiagonal() * ops.M(j, l) * pl.asDiagonal();
    }
    const Eigen::MatrixXcd dv = pj.asDiagonal() * ops.V(j);
    sys.Z -= w * (dv + dv.adjoint());
  }
  make_hermitian(sys.Z);
  sys.Z0 = remove_block(sys.Z, sys.zero, 1);

  // e^+ Q_j = row 0 of M_jl D_l - w V_j;  e^+ R = row 0 of w N + V_l^+ D_l.
  sys.q_row = Eigen::MatrixXcd::Zero(n, d);
  for (int j = 0; j < d; ++j) {
    Eigen::VectorXcd row = -w * ops.V(j).row(z).transpose();
    for (int l = 0; l < d; ++l)
      row += ops.M(j, l).row(z).transpose().cwiseProduct(ops.D.col(l).cast<cplx>());
    sys.q_row.col(j) = row;
  }
  sys.r_row = w * ops.N().row(z).transpose();
  for (int l = 0; l < d; ++l)
    sys.r_row += ops.V(l).col(z).conjugate().cwiseProduct(ops.D.col(l).cast<cplx>());

  sys.q = remove_rows(sys.q_row.conjugate(), sys.zero, 1);
  sys.r = remove_rows(sys.r_row.conjugate(), sys.zero, 1);
  sys.w = -w * sys.r;
  for (int j = 0; j < d; ++j) sys.w += ops.k(j) * sys.q.col(j);

  sys.mean_Z = sys.Z(z, z);
  sys.mean_mu.resize(d, d);
  sys.mean_s.resize(d);
  for (int j = 0; j < d; ++j) {
    for (int l = 0; l < d; ++l) sys.mean_mu(j, l) = ops.M(j, l)(z, z);
    sys.mean_s(j) = ops.V(j)(z, z);
  }
  sys.mean_rho = ops.N()(z, z).real();
  return sys;
}

RestrictedGreen restricted_green(const ImpedanceSystem& system, double threshold) {
  return RestrictedGreen(system.Z0, system.omega, system.k, threshold);
}

EffectiveParamsScalar effective_params(const ImpedanceSystem& sys, const RestrictedGreen& green) {
  const int d = sys.dimension;
  Eigen::MatrixXcd rhs(sys.q.rows(), d + 1);
  rhs.leftCols(d) = sys.q;
  rhs.col(d) = sys.r;
  const Eigen::MatrixXcd x = green.solve(rhs);

  EffectiveParamsScalar out;
  out.omega = sys.omega;
  out.k = sys.k;
  out.rcond = green.rcond();
  out.status = green.near_exceptional() ? ParamStatus::near_exceptional : ParamStatus::regular;
  out.mu = sys.mean_mu - sys.q.adjoint() * x.leftCols(d);
  out.s = sys.mean_s - sys.q.adjoint() * x.col(d);
  const cplx rho = sys.mean_rho + sys.r.dot(x.col(d));
  out.rho = rho.real();
  out.rho_imag = rho.imag();
  return out;
}

cplx inverse_mean_green(const ImpedanceSystem& sys, const RestrictedGreen& green) {
  return sys.mean_Z - sys.w.dot(green.solve(sys.w).col(0));
}

Eigen::VectorXcd bloch_mode(const ImpedanceSystem& sys, const RestrictedGreen& green) {
  const Eigen::VectorXcd inner = green.solve(sys.w).col(0);
  const auto z = static_cast<Eigen::Index>(sys.zero);
  Eigen::VectorXcd v(inner.size() + 1);
  v.head(z) = -inner.head(z);
  v(z) = 1.0;
  v.tail(inner.size() - z) = -inner.tail(inner.size() - z);
  return v;
}

cplx effective_impedance(const EffectiveParamsScalar& p) {
  const Eigen::VectorXcd k = p.k.cast<cplx>();
  const cplx kmuk = k.dot(p.mu * k);
  const double coupling = 2.0 * p.k.dot(p.s.real());
  return kmuk - p.omega * coupling - p.omega * p.omega * p.rho;
}

FullGreen::FullGreen(const ImpedanceSystem& sys, double threshold) : lu_(sys.Z), rcond_(lu_.rcond()) {
  if (!(rcond_ >= threshold)) throw OnBranchError(sys.omega, sys.k, rcond_);
}

AveragedCoefficients averaged_coefficients(const ImpedanceSystem& sys, const FullGreen& green) {
  const int d = sys.dimension;
  const auto n = sys.Z.rows();
  const auto z = static_cast<Eigen::Index>(sys.zero);
  // Columns: e, Q_j^+ e, R^+ e.
  Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(n, d + 2);
  rhs(z, 0) = 1.0;
  rhs.middleCols(1, d) = sys.q_row.conjugate();
  rhs.col(d + 1) = sys.r_row.conjugate();
  const Eigen::MatrixXcd y = green.solve(rhs);
  const Eigen::MatrixXcd qcols = rhs.middleCols(1, d);
  const Eigen::VectorXcd rcol = rhs.col(d + 1);

  AveragedCoefficients c;
  c.a = y(z, 0);
  c.b = y(z, d + 1);
  c.beta = qcols.adjoint() * y.col(0);
  c.A = sys.mean_mu - qcols.adjoint() * y.middleCols(1, d);
  c.alpha = sys.mean_s - qcols.adjoint() * y.col(d + 1);
  c.rgr = rcol.dot(y.col(d + 1));
  return c;
}

ForcedResponse forced_response(const ImpedanceSystem& sys, const FullGreen& green, cplx f,
                               const Eigen::VectorXcd& gamma) {
  if (gamma.size() != sys.dimension) throw InvalidArgument("gamma must have one entry per axis");
  const cplx i(0.0, 1.0);
  ForcedResponse r;
  r.coefficients = averaged_coefficients(sys, green);
  const auto& c = r.coefficients;
  r.u = c.a * f - i * c.beta.dot(gamma);
  r.sigma = i * c.beta * f - c.A * gamma;
  r.p = -i * std::conj(c.b) * f + c.alpha.dot(gamma);
  return r;
}

EffectiveParamsScalar effective_params_unregularized(const ImpedanceSystem& sys) {
  const FullGreen green(sys);
  const auto c = averaged_coefficients(sys, green);
  EffectiveParamsScalar out;
  out.omega = sys.omega;
  out.k = sys.k;
  out.rcond = green.rcond();
  out.mu = c.A + c.beta * c.beta.adjoint() / c.a;
  out.s = c.alpha + (c.b / c.a) * c.beta;
  const cplx rho = sys.mean_rho + c.rgr - std::norm(c.b) / c.a;
  out.rho = rho.real();
  out.rho_imag = rho.imag();
  return out;
}

EffectiveParamsScalar effective_params_at(const ScalarModel& model, double omega,
                                          const Eigen::VectorXd& k) {
  const auto sys = assemble_impedance(assemble_operators(model, omega, k));
  return effective_params(sys, restricted_green(sys));
}

}  // namespace willis
