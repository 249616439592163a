#include "willis/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "willis/errors.hpp"
#include "willis/parallel.hpp"

namespace willis {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void flag_degenerate(Bands& bands) {
  const auto& w = bands.omega;
  bands.degenerate.assign(w.size(), false);
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    const double scale = std::max(std::abs(w[i]), std::abs(w[i + 1]));
    if (scale > 0.0 && w[i + 1] - w[i] <= kDegeneracyTol * scale)
      bands.degenerate[i] = bands.degenerate[i + 1] = true;
  }
}

std::vector<double> definite_roots(const QuadraticPencil& p) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> eig(p.stiffness, p.mass,
                                                                 Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw InvalidProfile("mass matrix is not positive definite");
  // omega^2 at rounding level of the largest eigenvalue is a static mode.
  const auto& lambda = eig.eigenvalues();
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * lambda.cwiseAbs().maxCoeff();
  std::vector<double> out;
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    out.push_back(lambda(i) <= noise ? 0.0 : std::sqrt(lambda(i)));
  return out;
}

// Z(w) v = 0 with N = L L^+ becomes (A - w B - w^2) y = 0, y = L^+ v, which
// is linearized on [y; w y].
std::vector<double> companion_roots(const QuadraticPencil& p) {
  Eigen::LLT<Eigen::MatrixXcd> llt(p.mass);
  if (llt.info() != Eigen::Success) throw InvalidProfile("mass matrix is not positive definite");
  const auto n = p.mass.rows();
  auto congruence = [&](const Eigen::MatrixXcd& m) {
    const Eigen::MatrixXcd left = llt.matrixL().solve(m);
    return Eigen::MatrixXcd(llt.matrixL().solve(left.adjoint()).adjoint());
  };
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  c.topRightCorner(n, n).setIdentity();
  c.bottomLeftCorner(n, n) = congruence(p.stiffness);
  c.bottomRightCorner(n, n) = -congruence(p.gyroscopic);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(c, false);
  if (eig.info() != Eigen::Success) throw Error("companion eigensolve failed");
  const double scale = std::sqrt(c.bottomLeftCorner(n, n).norm() / std::sqrt(double(n)));
  std::vector<double> out;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    const cplx w = eig.eigenvalues()(i);
    const double floor = 1e-12 * scale;
    if (std::abs(w) <= floor) {
      out.push_back(0.0);
    } else if (std::abs(w.imag()) < 1e-8 * std::abs(w) && w.real() > 0.0) {
      out.push_back(w.real());
    }
  }
  std::sort(out.begin(), out.end());
  // Roots at zero come in +/- pairs; keep one of each pair.
  std::vector<double> dedup;
  int zeros = 0;
  for (double w : out) {
    if (w == 0.0 && (zeros++ % 2) == 1) continue;
    dedup.push_back(w);
  }
  return dedup;
}

int count_null(const Eigen::VectorXd& eigenvalues) {
  const double scale = eigenvalues.cwiseAbs().maxCoeff();
  int count = 0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
    if (std::abs(eigenvalues(i)) <= kDegeneracyTol * scale) ++count;
  return count;
}

// Fraction of the null vector of Z carried by the g = 0 block.
double null_vector_mean(const HermitianFactor& fz, Eigen::Index first, Eigen::Index count) {
  Eigen::Index best = 0;
  fz.eigenvalues().cwiseAbs().minCoeff(&best);
  const Eigen::VectorXcd v = fz.eigenvectors().col(best);
  return v.segment(first, count).norm() / v.norm();
}

// Flags sharp V-shaped slope reversals, which in sorted data mark a crossing
// rather than a band extremum.
void flag_crossings(BlochBranchSet& set) {
  const std::size_t m = set.samples();
  if (m < 3) return;
  for (auto b = 0; b < set.branches(); ++b) {
    const auto& w = set.omega[b];
    std::vector<double> slope(m - 1, 0.0);
    double steepest = 0.0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      const double dk = (set.k[i + 1] - set.k[i]).norm();
      slope[i] = dk > 0.0 ? (w[i + 1] - w[i]) / dk : 0.0;
      if (std::isfinite(slope[i])) steepest = std::max(steepest, std::abs(slope[i]));
    }
    for (std::size_t i = 1; i + 1 < m; ++i) {
      if (set.status[b][i] != PointClass::regular) continue;
      const double a = slope[i - 1];
      const double c = slope[i];
      if (a * c < 0.0 && std::min(std::abs(a), std::abs(c)) > 0.5 * steepest)
        set.status[b][i] = PointClass::near_double_point;
    }
  }
}

template <class Model, class Classify>
BlochBranchSet trace_impl(const Model& model, const std::vector<Eigen::VectorXd>& k_grid,
                          int n_branches, const TraceOptions& options, Classify&& classify,
                          std::function<Bands(const Eigen::VectorXd&)> bands_at) {
  BlochBranchSet set;
  set.k = k_grid;
  set.omega.assign(n_branches, std::vector<double>(k_grid.size(), kNaN));
  set.status.assign(n_branches, std::vector<PointClass>(k_grid.size(), PointClass::regular));
  parallel_for(k_grid.size(), options.threads, [&](std::size_t i) {
    const Bands bands = bands_at(k_grid[i]);
    for (int b = 0; b < n_branches && b < static_cast<int>(bands.omega.size()); ++b) {
      set.omega[b][i] = bands.omega[b];
      set.status[b][i] = bands.degenerate[b]
                             ? PointClass::near_double_point
                             : classify(model, bands.omega[b], k_grid[i], options.threshold);
    }
  });
  flag_crossings(set);
  return set;
}

}  // namespace

std::string to_string(PointClass c) {
  switch (c) {
    case PointClass::regular: return "regular";
    case PointClass::exceptional_off_branch: return "exceptional-off-branch";
    case PointClass::zero_mean_bloch: return "zero-mean-Bloch";
    case PointClass::near_double_point: return "near-double-point";
  }
  return "unknown";
}

QuadraticPencil scalar_pencil(const ScalarModel& model, const Eigen::VectorXd& k) {
  const auto ops = assemble_operators(model, 0.0, k);
  const int d = model.dimension();
  const auto n = static_cast<Eigen::Index>(ops.material->size);
  QuadraticPencil p{Eigen::MatrixXcd::Zero(n, n), Eigen::MatrixXcd::Zero(n, n), ops.N()};
  for (int j = 0; j < d; ++j) {
    const Eigen::VectorXcd pj = ops.D.col(j).cast<cplx>();
    for (int l = 0; l < d; ++l)
      p.stiffness.noalias() += pj.asDiagonal() * ops.M(j, l) * ops.D.col(l).cast<cplx>().asDiagonal();
    const Eigen::MatrixXcd dv = pj.asDiagonal() * ops.V(j);
    p.gyroscopic += dv + dv.adjoint();
  }
  make_hermitian(p.stiffness);
  make_hermitian(p.gyroscopic);
  return p;
}

Bands solve_pencil(const QuadraticPencil& pencil, int n_branches) {
  if (n_branches < 1 || n_branches > pencil.mass.rows())
    throw InvalidArgument("branch count must lie between 1 and the basis size");
  Bands bands;
  bands.omega = pencil.gyroscopic_zero() ? definite_roots(pencil) : companion_roots(pencil);
  flag_degenerate(bands);
  if (static_cast<int>(bands.omega.size()) > n_branches) {
    bands.omega.resize(n_branches);
    bands.degenerate.resize(n_branches);
  }
  bands.none_found = bands.omega.empty();
  return bands;
}

double polish_root(const ScalarModel& model, double omega, const Eigen::VectorXd& k) {
  if (!(omega > 0.0)) return omega;
  try {
    auto f = [&](double w) { return dispersion_residual(model, w, k).real(); };
    const double h = 1e-7 * omega;
    const double f0 = f(omega);
    const double slope = (f(omega + h) - f(omega - h)) / (2.0 * h);
    if (slope == 0.0 || !std::isfinite(slope)) return omega;
    const double next = omega - f0 / slope;
    if (!(std::abs(next - omega) <= 1e-6 * omega)) return omega;
    return std::abs(f(next)) < std::abs(f0) ? next : omega;
  } catch (const ExceptionalPointError&) {
    return omega;
  }
}

Bands band_structure(const ScalarModel& model, const Eigen::VectorXd& k, int n_branches,
                     BandOptions options) {
  Bands bands = solve_pencil(scalar_pencil(model, k), n_branches);
  if (options.polish) {
    for (auto& w : bands.omega) w = polish_root(model, w, k);
    std::sort(bands.omega.begin(), bands.omega.end());
  }
  return bands;
}

Bands band_structure(const ElasticModel& model, const Eigen::Vector3d& k, int n_branches) {
  return solve_pencil(elastic_pencil(model, k), n_branches);
}

std::vector<Eigen::VectorXd> k_line(double start, double stop, int count,
                                    const Eigen::VectorXd& direction) {
  if (count < 1) throw InvalidArgument("k-grid needs at least one sample");
  std::vector<Eigen::VectorXd> out;
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? start : start + (stop - start) * i / (count - 1);
    out.push_back(t * direction);
  }
  return out;
}

BlochBranchSet trace_branches(const ScalarModel& model, const std::vector<Eigen::VectorXd>& k_grid,
                              int n_branches, TraceOptions options) {
  auto classify = [](const ScalarModel& m, double w, const Eigen::VectorXd& k, double threshold) {
    return classify_point(m, w, k, threshold).classification;
  };
  return trace_impl(model, k_grid, n_branches, options, classify, [&](const Eigen::VectorXd& k) {
    return band_structure(model, k, n_branches, {options.polish});
  });
}

BlochBranchSet trace_branches(const ElasticModel& model, const std::vector<Eigen::VectorXd>& k_grid,
                              int n_branches, TraceOptions options) {
  auto classify = [](const ElasticModel& m, double w, const Eigen::VectorXd& k, double threshold) {
    return classify_point(m, w, Eigen::Vector3d(k), threshold).classification;
  };
  for (const auto& k : k_grid)
    if (k.size() != 3) throw InvalidArgument("elastic wave-vectors have three components");
  return trace_impl(model, k_grid, n_branches, options, classify, [&](const Eigen::VectorXd& k) {
    return band_structure(model, Eigen::Vector3d(k), n_branches);
  });
}

cplx dispersion_residual(const ScalarModel& model, double omega, const Eigen::VectorXd& k) {
  const auto sys = assemble_impedance(assemble_operators(model, omega, k));
  return inverse_mean_green(sys, restricted_green(sys));
}

cplx dispersion_residual(const ElasticModel& model, double omega, const Eigen::Vector3d& k) {
  const auto sys = assemble_elastic(model, omega, k);
  return inverse_mean_green(sys, restricted_green(sys)).determinant();
}

ExceptionalReport classify_point(const ScalarModel& model, double omega, const Eigen::VectorXd& k,
                                 double threshold) {
  const auto sys = assemble_impedance(assemble_operators(model, omega, k));
  const HermitianFactor fz(sys.Z);
  const HermitianFactor f0(sys.Z0);
  ExceptionalReport r;
  r.omega = omega;
  r.k = k;
  r.rcond = f0.rcond();
  r.null_count = count_null(fz.eigenvalues());
  r.residual = cplx(kNaN, kNaN);
  r.bloch_mean = kNaN;
  if (r.null_count >= 1) r.bloch_mean = null_vector_mean(fz, static_cast<Eigen::Index>(sys.zero), 1);
  if (r.null_count >= 2) {
    r.classification = PointClass::near_double_point;
  } else if (r.rcond < threshold) {
    r.classification = r.null_count == 1 ? PointClass::zero_mean_bloch : PointClass::exceptional_off_branch;
  } else {
    r.classification = PointClass::regular;
    r.residual = sys.mean_Z - sys.w.dot(f0.solve(sys.w).col(0));
  }
  return r;
}

ExceptionalReport classify_point(const ElasticModel& model, double omega, const Eigen::Vector3d& k,
                                 double threshold) {
  const auto sys = assemble_elastic(model, omega, k);
  const HermitianFactor fz(sys.Z);
  const HermitianFactor f0(sys.Z0);
  ExceptionalReport r;
  r.omega = omega;
  r.k = k;
  r.rcond = f0.rcond();
  r.null_count = count_null(fz.eigenvalues());
  r.residual = cplx(kNaN, kNaN);
  r.bloch_mean = kNaN;
  if (r.null_count >= 1)
    r.bloch_mean = null_vector_mean(fz, static_cast<Eigen::Index>(3 * sys.zero), 3);
  if (r.null_count >= 2) {
    r.classification = PointClass::near_double_point;
  } else if (r.rcond < threshold) {
    r.classification = r.null_count == 1 ? PointClass::zero_mean_bloch : PointClass::exceptional_off_branch;
  } else {
    r.classification = PointClass::regular;
    r.residual = (sys.mean_Z - sys.w.adjoint() * f0.solve(sys.w)).determinant();
  }
  return r;
}

std::vector<BranchSample> params_on_branch(const ScalarModel& model, const BlochBranchSet& set,
                                           int branch, int threads) {
  if (branch < 0 || branch >= set.branches()) throw InvalidArgument("branch index out of range");
  std::vector<BranchSample> out(set.samples());
  parallel_for(set.samples(), threads, [&](std::size_t i) {
    auto& s = out[i];
    s.k = set.k[i];
    s.omega = set.omega[branch][i];
    s.status = set.status[branch][i];
    if (s.status != PointClass::regular || !std::isfinite(s.omega)) return;
    try {
      s.params = effective_params_at(model, s.omega, s.k);
    } catch (const ExceptionalPointError&) {
      s.status = PointClass::zero_mean_bloch;
    }
  });
  return out;
}

}  // namespace willis
