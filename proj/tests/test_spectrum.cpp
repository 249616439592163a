#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "support.hpp"
#include "willis/errors.hpp"
#include "willis/monodromy.hpp"
#include "willis/spectrum.hpp"

using namespace willis;
using willis::testing::constant_rho;
using willis::testing::density_contrast;
using willis::testing::rel;
using willis::testing::table1;
using willis::testing::uniform1d;
using willis::testing::vec1;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> folded(double k, int n, double speed = 1.0) {
  std::vector<double> w;
  for (int m = -n; m <= n; ++m) w.push_back(std::abs(k + 2 * kPi * m) * speed);
  std::sort(w.begin(), w.end());
  w.resize(n);
  return w;
}

ElasticProfile layered_elastic(const std::vector<double>& lambda, const std::vector<double>& mu,
                               const std::vector<double>& rho, const std::vector<double>& h) {
  std::vector<ElasticPhase> phases;
  LayerStack stack;
  for (std::size_t l = 0; l < mu.size(); ++l) {
    phases.push_back(ElasticPhase::isotropic("L", lambda[l], mu[l], rho[l]));
    stack.layers.push_back({l, h[l]});
  }
  return ElasticProfile(Lattice::line(1.0), phases, stack);
}

}  // namespace

TEST(Bands, EmptyLatticeFolding) {
  const ScalarModel m(uniform1d(), 32);
  for (double k : {0.0, 0.4, 1.9, kPi, 5.0}) {
    const Bands b = band_structure(m, vec1(k), 6);
    const auto expect = folded(k, 6);
    ASSERT_EQ(b.omega.size(), 6u);
    for (int n = 0; n < 6; ++n) EXPECT_NEAR(b.omega[n], expect[n], 1e-10) << k;
  }
}

TEST(Bands, UniformMatchesMonodromyExactly) {
  const ScalarProfile p = ScalarProfile::layered({2.0, 2.0}, {0.5, 0.5}, {0.4, 0.6});
  const ScalarModel m(p, 16);
  const Bands b = band_structure(m, vec1(1.1), 6);
  for (double w : b.omega) EXPECT_NEAR(mm_dispersion(p, w), std::cos(1.1), 1e-10);
}

TEST(Bands, Table1ConvergesToMonodromyRoots) {
  // Error of the inverse-rule truncation against the exact branch roots
  // decreases with N on every one of the first six branches.
  const ScalarProfile p = table1();
  const double k = 1.3;
  std::vector<double> exact;
  for (int n = 0; n < 6; ++n) exact.push_back(mm_branch_frequency(p, k, n));
  std::vector<double> previous(6, 1e300);
  for (int N : {16, 64, 256}) {
    const Bands b = band_structure(ScalarModel(p, N), vec1(k), 6);
    for (int n = 0; n < 6; ++n) {
      const double err = std::abs(b.omega[n] - exact[n]) / exact[n];
      EXPECT_LT(err, previous[n]) << "N=" << N << " branch " << n + 1;
      previous[n] = err;
    }
  }
  for (int n = 0; n < 6; ++n) EXPECT_LT(previous[n], 1e-4) << n;
}

TEST(Bands, Table1BandEdgesBracketed) {
  // k = 0 and k = pi frequencies sit where |tr M / 2| = 1.
  const ScalarProfile p = table1();
  const ScalarModel m(p, 128);
  for (double k : {0.0, kPi}) {
    const Bands b = band_structure(m, vec1(k), 6);
    for (int n = 0; n < 6; ++n) {
      const double exact = mm_branch_frequency(p, k, n);
      EXPECT_LT(std::abs(b.omega[n] - exact), 2e-4 * std::max(1.0, exact)) << k << " " << n;
      EXPECT_NEAR(std::abs(mm_dispersion(p, exact)), 1.0, 1e-9);
    }
  }
}

TEST(Bands, GyroscopicClosedForm) {
  // Uniform medium with a real coupling: rho w^2 + 2 Re(S) p w - mu p^2 = 0.
  const double mu = 1.5;
  const double rho = 0.8;
  const cplx s(0.3, 0.2);
  ScalarPhase ph = ScalarPhase::isotropic("w", 1, mu, rho);
  ph.s = Eigen::VectorXcd::Constant(1, s);
  const ScalarProfile p(Lattice::line(1.0), {ph}, LayerStack{{{0, 1.0}}});
  const ScalarModel m(p, 8);
  const double k = 0.7;
  std::vector<double> expect;
  for (int n = -8; n <= 8; ++n) {
    const double q = k + 2 * kPi * n;
    for (double sign : {-1.0, 1.0}) {
      const double w = (-s.real() * q + sign * std::abs(q) * std::sqrt(s.real() * s.real() + rho * mu)) / rho;
      if (w > 0) expect.push_back(w);
    }
  }
  std::sort(expect.begin(), expect.end());
  const Bands b = band_structure(m, vec1(k), 6);
  ASSERT_EQ(b.omega.size(), 6u);
  for (int n = 0; n < 6; ++n) EXPECT_NEAR(b.omega[n], expect[n], 1e-9 * expect[n]);
}

TEST(Bands, BranchCountValidated) {
  const ScalarModel m(uniform1d(), 2);
  EXPECT_THROW(band_structure(m, vec1(0.1), 0), InvalidArgument);
  EXPECT_THROW(band_structure(m, vec1(0.1), 6), InvalidArgument);
}

TEST(Bands, ParityInK) {
  const ScalarModel m(table1(), 64);
  for (double k : {0.2, 1.0, 2.9}) {
    const Bands a = band_structure(m, vec1(k), 6);
    const Bands b = band_structure(m, vec1(-k), 6);
    // omega^2 carries eigensolver noise of order eps * ||K|| / ||N|| ~ 1e-10 at N = 64.
    for (int n = 0; n < 6; ++n) EXPECT_NEAR(a.omega[n], b.omega[n], 1e-8 * std::max(1.0, a.omega[n]));
  }
}

TEST(Bands, PolishKeepsOrImproves) {
  const ScalarModel m(table1(), 64);
  const Bands raw = band_structure(m, vec1(0.8), 4);
  const Bands pol = band_structure(m, vec1(0.8), 4, {true});
  for (int n = 0; n < 4; ++n) {
    EXPECT_LE(std::abs(pol.omega[n] - raw.omega[n]), 1e-6 * raw.omega[n]);
    EXPECT_LE(std::abs(dispersion_residual(m, pol.omega[n], vec1(0.8))),
              std::abs(dispersion_residual(m, raw.omega[n], vec1(0.8))) + 1e-300);
  }
}

TEST(Trace, UniformFoldedLines) {
  const ScalarModel m(uniform1d(), 16);
  const auto grid = k_line(0.0, kPi, 21, Eigen::VectorXd::Ones(1));
  const auto set = trace_branches(m, grid, 6);
  ASSERT_EQ(set.branches(), 6);
  for (std::size_t i = 0; i < set.samples(); ++i) {
    const auto expect = folded(grid[i](0), 6);
    for (int b = 0; b < 6; ++b) EXPECT_NEAR(set.omega[b][i], expect[b], 1e-10);
  }
}

TEST(Trace, OrderingAndDeterminism) {
  const ScalarModel m(table1(), 32);
  const auto grid = k_line(0.0, kPi, 40, Eigen::VectorXd::Ones(1));
  const auto a = trace_branches(m, grid, 6, {1});
  const auto b = trace_branches(m, grid, 6, {3});
  for (int n = 0; n < 6; ++n)
    for (std::size_t i = 0; i < a.samples(); ++i) {
      if (n + 1 < 6) EXPECT_LE(a.omega[n][i], a.omega[n + 1][i]);
      EXPECT_EQ(a.omega[n][i], b.omega[n][i]);
      EXPECT_EQ(a.status[n][i], b.status[n][i]);
    }
}

TEST(Trace, Table1AlternatingGaps) {
  const ScalarModel m(table1(), 64);
  const auto grid = k_line(0.0, kPi, 200, Eigen::VectorXd::Ones(1));
  const auto set = trace_branches(m, grid, 6, {4});
  const std::size_t last = set.samples() - 1;
  // Gaps open between branches n and n+1 at k = pi for odd n, at k = 0 for even n.
  for (int n = 0; n < 5; ++n) {
    const std::size_t edge = n % 2 == 0 ? last : 0;
    EXPECT_GT(set.omega[n + 1][edge] - set.omega[n][edge], 0.1) << n;
  }
  // Branch 1 rises monotonically from zero.
  EXPECT_EQ(set.omega[0][0], 0.0);
  for (std::size_t i = 0; i < last; ++i) EXPECT_LT(set.omega[0][i], set.omega[0][i + 1]);
}

TEST(Trace, CrossingFlagged) {
  // Impedance-matched layers never reflect, so the folded lines |k + 2 pi n| / tau
  // cross at k = pi, but the Bloch modes are not single plane waves.
  const ScalarModel m(ScalarProfile::layered({1.0, 4.0}, {1.0, 0.25}, {0.5, 0.5}), 16);
  const auto grid = k_line(2.5, 3.79, 13, Eigen::VectorXd::Ones(1));
  const auto set = trace_branches(m, grid, 2);
  int flagged = 0;
  for (std::size_t i = 0; i < set.samples(); ++i)
    if (set.status[0][i] == PointClass::near_double_point) ++flagged;
  EXPECT_GE(flagged, 1);
  EXPECT_EQ(set.status[0][0], PointClass::regular);
}

TEST(Trace, UniformFoldedModesHaveZeroMean) {
  // Past k = pi the lowest uniform mode is exp(i (k - 2 pi) x), whose periodic part averages to zero.
  const ScalarModel m(uniform1d(), 8);
  const auto set = trace_branches(m, k_line(2.5, 3.79, 13, Eigen::VectorXd::Ones(1)), 2);
  EXPECT_EQ(set.status[0][0], PointClass::regular);
  EXPECT_EQ(set.status[0][12], PointClass::zero_mean_bloch);
  EXPECT_EQ(set.status[1][0], PointClass::zero_mean_bloch);
}

TEST(Residual, UniformAndIdentities) {
  const ScalarModel u(ScalarProfile::layered({2.0}, {3.0}, {1.0}), 4);
  EXPECT_LT(std::abs(dispersion_residual(u, 0.9, vec1(0.3)) - (2.0 * 0.09 - 3.0 * 0.81)), 1e-14);

  const ScalarModel m(table1(), 64);
  const Bands b = band_structure(m, vec1(1.0), 6);
  for (double w : b.omega) {
    const auto sys = assemble_impedance(assemble_operators(m, w, vec1(1.0)));
    EXPECT_LT(std::abs(dispersion_residual(m, w, vec1(1.0))), 1e-6 * std::abs(sys.mean_Z)) << w;
  }
  for (const auto& [w, k] : {std::pair{0.7, 0.4}, std::pair{3.3, 2.0}, std::pair{9.0, -1.0}}) {
    const auto p = effective_params_at(m, w, vec1(k));
    EXPECT_LT(rel(dispersion_residual(m, w, vec1(k)), effective_impedance(p)), 1e-10);
  }
}

TEST(Classify, GenericRegular) {
  const ScalarModel m(table1(), 32);
  const auto r = classify_point(m, 1.0, vec1(0.5));
  EXPECT_EQ(r.classification, PointClass::regular);
  EXPECT_EQ(r.null_count, 0);
  EXPECT_GT(r.rcond, 1e-6);
  EXPECT_TRUE(std::isfinite(std::abs(r.residual)));
}

TEST(Classify, ConstantDensityZeroMean) {
  const ScalarModel m(constant_rho(), 64);
  const Bands b = band_structure(m, vec1(0.0), 2);
  const auto r = classify_point(m, b.omega[1], vec1(0.0));
  EXPECT_EQ(r.classification, PointClass::zero_mean_bloch);
  EXPECT_LT(r.bloch_mean, 1e-8);
  EXPECT_LT(r.rcond, kExceptionalRcond);
}

TEST(Classify, ExceptionalOffBranch) {
  // Resonance of the restricted impedance of Table 1 at k = 0: Z_\0 is
  // singular but Z is not, so no Bloch wave exists there.
  const ScalarModel m(table1(), 32);
  const auto sys = assemble_impedance(assemble_operators(m, 0.0, vec1(0.0)));
  const Eigen::MatrixXcd n0 = remove_block(m.material()->N, m.material()->zero, 1);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> eig(sys.Z0, n0, Eigen::EigenvaluesOnly);
  const double w = std::sqrt(eig.eigenvalues()(0));
  const auto r = classify_point(m, w, vec1(0.0));
  EXPECT_EQ(r.classification, PointClass::exceptional_off_branch);
  EXPECT_EQ(r.null_count, 0);
}

TEST(Classify, DensityContrastRcondDecreases) {
  double previous = 1.0;
  for (double delta : {0.1, 0.05, 0.01}) {
    const ScalarModel m(density_contrast(delta), 64);
    const Bands b = band_structure(m, vec1(0.0), 2);
    const auto r = classify_point(m, b.omega[1], vec1(0.0));
    EXPECT_LT(r.rcond, previous) << delta;
    previous = r.rcond;
  }
}

TEST(BranchParams, Branch1QuasistaticLimits) {
  const ScalarModel m(table1(), 64);
  const auto set = trace_branches(m, k_line(1e-3, 0.5, 10, Eigen::VectorXd::Ones(1)), 1);
  const auto s = params_on_branch(m, set, 0);
  ASSERT_TRUE(s[0].params.has_value());
  EXPECT_NEAR(s[0].params->mu(0, 0).real() / 0.7322176 - 1, 0.0, 1e-3);
  EXPECT_NEAR(s[0].params->rho / 1.1545 - 1, 0.0, 1e-3);
  EXPECT_LT(std::abs(s[0].params->s(0)), 1e-3);
}

TEST(BranchParams, Branch5Features) {
  const ScalarModel m(table1(), 64);
  const auto set = trace_branches(m, k_line(0.0, kPi, 200, Eigen::VectorXd::Ones(1)), 5, {4});
  const auto s = params_on_branch(m, set, 4, 4);
  double max_mu = 0.0;
  double min_rho = 0.0;
  for (const auto& x : s) {
    if (!x.params) continue;
    if (x.k(0) < 0.2) max_mu = std::max(max_mu, x.params->mu(0, 0).real());
    min_rho = std::min(min_rho, x.params->rho);
  }
  EXPECT_GT(max_mu, 1e4);
  EXPECT_LT(min_rho, -2.0);
}

TEST(BranchParams, ExceptionalSamplesTagged) {
  const ScalarModel m(constant_rho(), 32);
  const auto set = trace_branches(m, k_line(0.0, 0.5, 5, Eigen::VectorXd::Ones(1)), 3);
  EXPECT_NE(set.status[1][0], PointClass::regular);
  const auto s = params_on_branch(m, set, 1);
  EXPECT_FALSE(s[0].params.has_value());
  EXPECT_TRUE(s[2].params.has_value());
  EXPECT_THROW(params_on_branch(m, set, 3), InvalidArgument);
}

TEST(Elastic, UniformBands) {
  const ElasticModel m(layered_elastic({2.0}, {1.0}, {1.0}, {1.0}), 6);
  const double k = 0.9;
  const Bands b = band_structure(m, Eigen::Vector3d(k, 0, 0), 6);
  std::vector<double> expect;
  for (int n = -6; n <= 6; ++n) {
    const double q = std::abs(k + 2 * kPi * n);
    expect.insert(expect.end(), {q, q, 2.0 * q});
  }
  std::sort(expect.begin(), expect.end());
  for (int n = 0; n < 6; ++n) EXPECT_NEAR(b.omega[n], expect[n], 1e-10 * expect[n]);
}

TEST(Elastic, TraceNeedsThreeComponents) {
  const ElasticModel m(layered_elastic({2.0}, {1.0}, {1.0}, {1.0}), 2);
  EXPECT_THROW(trace_branches(m, {vec1(0.1)}, 2), InvalidArgument);
}

TEST(Elastic, BranchNullVectorIsMean) {
  // 2D cell, oblique k: no symmetry degeneracy on the first branch.
  PhaseGrid grid{{20, 20}, {}, SampleModel::point};
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) grid.labels.push_back(i < 8 && j < 13 ? 1 : 0);
  const ElasticProfile p(Lattice::cubic(2, 1.0),
                         {ElasticPhase::isotropic("a", 2.0, 1.0, 1.0), ElasticPhase::isotropic("b", 6.0, 4.0, 2.5)}, grid);
  const ElasticModel m(p, 2);
  const Eigen::Vector3d k(0.5, 0.3, 0.2);
  const Bands b = band_structure(m, k, 3);
  ASSERT_FALSE(b.degenerate[0]);
  const double w = b.omega[0];
  const auto sys = assemble_elastic(m, w, k);
  const HermitianFactor fz(sys.Z);
  Eigen::Index best = 0;
  fz.eigenvalues().cwiseAbs().minCoeff(&best);
  const Eigen::Vector3cd mean = fz.eigenvectors().col(best).segment(3 * sys.zero, 3);
  const Eigen::Matrix3cd z = effective_impedance_matrix(effective_tensors(sys));
  EXPECT_LT((z * mean).norm(), 1e-6 * z.norm() * mean.norm());
  EXPECT_LT(std::abs(dispersion_residual(m, w, k)), 1e-6 * std::pow(sys.mean_Z.norm(), 3));
  const auto rep = classify_point(m, w, k);
  EXPECT_EQ(rep.classification, PointClass::regular);
}

// Stated truncation contract; registered as its own ctest entry.
TEST(ConvergenceContract, Table1HalfZoneN64VersusN128) {
  const ScalarProfile p = table1();
  const Bands a = band_structure(ScalarModel(p, 64), vec1(kPi / 2), 6);
  const Bands b = band_structure(ScalarModel(p, 128), vec1(kPi / 2), 6);
  for (int n = 0; n < 6; ++n) EXPECT_LT(std::abs(a.omega[n] - b.omega[n]) / b.omega[n], 1e-8) << "branch " << n + 1;
}
