#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "support.hpp"
#include "willis/errors.hpp"
#include "willis/fourier.hpp"
#include "willis/lattice.hpp"
#include "willis/material.hpp"

using namespace willis;
using willis::testing::table1;

namespace {

constexpr double kPi = std::numbers::pi;

// (1/T) int h(x) exp(-igx) dx by adaptive quadrature on each layer.
cplx quadrature_coefficient(const std::vector<double>& values, const std::vector<double>& h, double g) {
  using boost::math::quadrature::gauss_kronrod;
  double x0 = 0.0;
  double period = 0.0;
  for (double t : h) period += t;
  cplx sum = 0.0;
  for (std::size_t l = 0; l < h.size(); ++l) {
    const double x1 = x0 + h[l];
    const double re = gauss_kronrod<double, 61>::integrate([&](double x) { return std::cos(g * x); }, x0, x1);
    const double im = gauss_kronrod<double, 61>::integrate([&](double x) { return -std::sin(g * x); }, x0, x1);
    sum += values[l] * cplx(re, im);
    x0 = x1;
  }
  return sum / period;
}

ScalarProfile grid_profile(const std::vector<double>& mu, const std::vector<double>& rho,
                           const std::vector<double>& h, int samples, SampleModel model) {
  std::vector<ScalarPhase> phases;
  for (std::size_t p = 0; p < mu.size(); ++p)
    phases.push_back(ScalarPhase::isotropic("p" + std::to_string(p), 1, mu[p], rho[p]));
  PhaseGrid grid;
  grid.resolution = {samples};
  grid.model = model;
  double edge = 0.0;
  std::size_t phase = 0;
  for (int i = 0; i < samples; ++i) {
    const double t = (i + 0.5) / samples;
    while (t > edge + h[phase] && phase + 1 < h.size()) edge += h[phase++];
    grid.labels.push_back(phase);
  }
  return ScalarProfile(Lattice::line(1.0), phases, grid);
}

}  // namespace

TEST(Lattice, ReciprocalIdentity) {
  const Eigen::MatrixXd b = reciprocal_basis(Eigen::MatrixXd::Identity(1, 1));
  EXPECT_DOUBLE_EQ(b(0, 0), 1.0);
  const Lattice lat = Lattice::line(1.0);
  EXPECT_NEAR(lat.wavevector({3, 0, 0})(0), 6.0 * kPi, 1e-12);
}

TEST(Lattice, ReciprocalScaling) {
  const Lattice lat = Lattice::line(2.0);
  EXPECT_DOUBLE_EQ(lat.reciprocal()(0, 0), 0.5);
  EXPECT_NEAR(lat.wavevector({1, 0, 0})(0), kPi, 1e-14);
  EXPECT_DOUBLE_EQ(lat.volume(), 2.0);
}

TEST(Lattice, SkewCellDuality) {
  Eigen::MatrixXd a(2, 2);
  a << 1.0, 0.5, 0.0, 1.0;
  const Eigen::MatrixXd b = reciprocal_basis(a);
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) EXPECT_NEAR(a.col(j).dot(b.col(k)), j == k ? 1.0 : 0.0, 1e-12);
  // g reproduces n through the translations: a_j . g = 2 pi n_j.
  const Lattice lat(a);
  const Eigen::VectorXd g = lat.wavevector({2, -3, 0});
  EXPECT_NEAR(a.col(0).dot(g) / (2 * kPi), 2.0, 1e-12);
  EXPECT_NEAR(a.col(1).dot(g) / (2 * kPi), -3.0, 1e-12);
}

TEST(Lattice, SingularRejected) {
  Eigen::MatrixXd a(2, 2);
  a << 1.0, 2.0, 0.5, 1.0;
  EXPECT_THROW(reciprocal_basis(a), InvalidLattice);
  EXPECT_THROW(Lattice{a}, InvalidLattice);
}

TEST(Basis, Enumeration1D) {
  const PlaneWaveBasis basis = build_basis(Lattice::line(1.0), 2);
  ASSERT_EQ(basis.size(), 5u);
  const double expect[] = {-4 * kPi, -2 * kPi, 0.0, 2 * kPi, 4 * kPi};
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(basis[i].g(0), expect[i], 1e-12);
  EXPECT_EQ(basis.zero_index(), 2u);
}

TEST(Basis, SizesAndClosure) {
  for (int d = 1; d <= 3; ++d) {
    const PlaneWaveBasis basis = build_basis(Lattice::cubic(d, 1.0), 1);
    EXPECT_EQ(basis.size(), static_cast<std::size_t>(std::pow(3, d)));
    int zeros = 0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (basis[i].g.norm() == 0.0) ++zeros;
      const std::size_t j = basis.find(-basis[i].n);
      ASSERT_LT(j, basis.size());
      EXPECT_NEAR((basis[j].g + basis[i].g).norm(), 0.0, 1e-12);
    }
    EXPECT_EQ(zeros, 1);
    EXPECT_EQ(basis[basis.zero_index()].g.norm(), 0.0);
  }
}

TEST(Basis, DifferenceSlotsRoundTrip) {
  const PlaneWaveBasis basis = build_basis(Lattice::cubic(2, 1.0), 2);
  EXPECT_EQ(basis.difference_count(), 81u);
  for (std::size_t a = 0; a < basis.size(); ++a)
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const MultiIndex m = basis[a].n - basis[b].n;
      EXPECT_EQ(basis.difference_index(basis.difference_slot(m)), m);
    }
}

TEST(Layered, UniformIsDelta) {
  const LayerValue one[] = {{2.5, 1.0}};
  EXPECT_EQ(fourier_layered(one, 0.0), cplx(2.5));
  for (int n = 1; n <= 8; ++n) EXPECT_EQ(fourier_layered(one, 2 * kPi * n), cplx(0.0));
  const LayerValue split[] = {{2.5, 0.3}, {2.5, 0.7}};
  for (int n = 1; n <= 8; ++n) EXPECT_LT(std::abs(fourier_layered(split, 2 * kPi * n)), 1e-15);
}

TEST(Layered, HalfHalfCell) {
  const LayerValue cell[] = {{1.0, 0.5}, {2.0, 0.5}};
  const cplx c = fourier_layered(cell, 2 * kPi);
  EXPECT_NEAR(c.real(), 0.0, 1e-15);
  EXPECT_NEAR(c.imag(), 1.0 / kPi, 1e-15);
  const cplx quad = quadrature_coefficient({1.0, 2.0}, {0.5, 0.5}, 2 * kPi);
  EXPECT_LT(std::abs(c - quad), 1e-12);
  EXPECT_DOUBLE_EQ(fourier_layered(cell, 0.0).real(), 1.5);
}

TEST(Layered, QuadratureOracleTable1) {
  const std::vector<double> mu = {1.0, 7.0, 1.0 / 3.0};
  const std::vector<double> h = {0.37, 0.313, 0.317};
  std::vector<LayerValue> cell;
  for (int l = 0; l < 3; ++l) cell.push_back({mu[l], h[l]});
  for (int n = -6; n <= 6; ++n) {
    const double g = 2 * kPi * n;
    EXPECT_LT(std::abs(fourier_layered(cell, g) - quadrature_coefficient(mu, h, g)), 1e-12) << n;
  }
}

TEST(Layered, Table1Averages) {
  const ScalarFields avg = cell_average(table1());
  EXPECT_NEAR(avg.mu(0, 0).real(), 0.37 + 7 * 0.313 + 0.317 / 3.0, 1e-14);
  EXPECT_NEAR(avg.mu(0, 0).real(), 2.66667, 1e-5);
  EXPECT_NEAR(avg.rho.real(), 1.1545, 1e-14);
  const ScalarFields zero = fourier_coefficient(table1(), {0, 0, 0});
  EXPECT_EQ(zero.rho, avg.rho);
}

TEST(Layered, ConjugateSymmetry) {
  const ScalarProfile p = table1();
  const PlaneWaveBasis basis = build_basis(p.lattice(), 16);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto a = fourier_coefficient(p, basis[i].n);
    const auto b = fourier_coefficient(p, -basis[i].n);
    EXPECT_LT(std::abs(b.mu(0, 0) - std::conj(a.mu(0, 0))), 1e-12 * std::max(1.0, std::abs(a.mu(0, 0))));
    EXPECT_LT(std::abs(b.rho - std::conj(a.rho)), 1e-12 * std::max(1.0, std::abs(a.rho)));
  }
}

TEST(Layered, ParsevalConvergence) {
  const ScalarProfile p = table1();
  double mean_sq = 0.0;
  const double mu[] = {1.0, 7.0, 1.0 / 3.0};
  const double h[] = {0.37, 0.313, 0.317};
  for (int l = 0; l < 3; ++l) mean_sq += mu[l] * mu[l] * h[l];
  double partial = std::norm(fourier_coefficient(p, {0, 0, 0}).mu(0, 0));
  double previous = partial;
  std::vector<double> gap;
  for (int n = 1; n <= 1024; ++n) {
    partial += std::norm(fourier_coefficient(p, {n, 0, 0}).mu(0, 0));
    partial += std::norm(fourier_coefficient(p, {-n, 0, 0}).mu(0, 0));
    EXPECT_GE(partial, previous);
    EXPECT_LE(partial, mean_sq * (1 + 1e-12));
    previous = partial;
    if (n == 256 || n == 512 || n == 1024) gap.push_back((mean_sq - partial) / mean_sq);
  }
  // Jumps give |c_n|^2 ~ 1/n^2, so the missing energy halves with each doubling.
  EXPECT_LT(gap[0], 2e-3);
  EXPECT_NEAR(gap[1] / gap[0], 0.5, 0.1);
  EXPECT_NEAR(gap[2] / gap[1], 0.5, 0.1);
}

TEST(Grid, ConstantField) {
  SampledField f{{64}, std::vector<cplx>(64, cplx(3.0))};
  EXPECT_NEAR(std::abs(fourier_grid(f, {0, 0, 0}) - 3.0), 0.0, 1e-14);
  for (int n = 1; n < 32; ++n) EXPECT_LT(std::abs(fourier_grid(f, {n, 0, 0})), 1e-12);
}

TEST(Grid, RealFieldConjugateSymmetry) {
  SampledField f{{16, 20}, {}};
  for (int i = 0; i < 16 * 20; ++i) f.values.push_back(std::sin(0.37 * i) + 0.1 * (i % 7));
  for (int a = -5; a <= 5; ++a)
    for (int b = -5; b <= 5; ++b) {
      const cplx p = fourier_grid(f, {a, b, 0});
      const cplx m = fourier_grid(f, {-a, -b, 0});
      EXPECT_LT(std::abs(m - std::conj(p)), 1e-12);
    }
}

TEST(Grid, BandLimitedExact) {
  // Point sampling is exact for a trigonometric polynomial below Nyquist.
  SampledField f{{32}, {}};
  for (int i = 0; i < 32; ++i) {
    const double t = (i + 0.5) / 32;
    f.values.push_back(1.0 + 0.25 * std::cos(2 * kPi * 3 * t) + 0.5 * std::sin(2 * kPi * 5 * t));
  }
  EXPECT_LT(std::abs(fourier_grid(f, {3, 0, 0}) - 0.125), 1e-14);
  EXPECT_LT(std::abs(fourier_grid(f, {5, 0, 0}) - cplx(0.0, -0.25)), 1e-14);
  EXPECT_LT(std::abs(fourier_grid(f, {4, 0, 0})), 1e-14);
}

TEST(Grid, ProviderEquivalenceAlignedLayers) {
  // Interfaces on voxel boundaries: the voxel model is exact.
  const std::vector<double> mu = {1.0, 7.0, 1.0 / 3.0};
  const std::vector<double> rho = {1.0, 2.0, 0.5};
  const std::vector<double> h = {0.375, 0.3125, 0.3125};
  const ScalarProfile layered = ScalarProfile::layered(mu, rho, h);
  const ScalarProfile grid = grid_profile(mu, rho, h, 4096, SampleModel::cell_average);
  const PlaneWaveBasis basis = build_basis(layered.lattice(), 32);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto a = fourier_coefficient(layered, basis[i].n);
    const auto b = fourier_coefficient(grid, basis[i].n);
    EXPECT_LT(std::abs(a.mu(0, 0) - b.mu(0, 0)), 1e-6);
    EXPECT_LT(std::abs(a.rho - b.rho), 1e-6);
  }
}

TEST(Grid, Table1ProviderGapIsResolutionLimited) {
  // Table 1 interfaces fall inside voxels; the mismatch is bounded by the
  // voxel width times the jump, well above 1e-6 but shrinking with R.
  const std::vector<double> mu = {1.0, 7.0, 1.0 / 3.0};
  const std::vector<double> h = {0.37, 0.313, 0.317};
  const ScalarProfile layered = ScalarProfile::layered(mu, {1, 2, 0.5}, h);
  double previous = 1e300;
  for (int samples : {1024, 4096, 16384}) {
    const ScalarProfile grid = grid_profile(mu, {1, 2, 0.5}, h, samples, SampleModel::cell_average);
    double worst = 0.0;
    for (int n = -32; n <= 32; ++n)
      worst = std::max(worst, std::abs(fourier_coefficient(layered, {n, 0, 0}).mu(0, 0) -
                                       fourier_coefficient(grid, {n, 0, 0}).mu(0, 0)));
    EXPECT_LT(worst, 7.0 / samples);
    EXPECT_LT(worst, previous);
    previous = worst;
  }
}

TEST(Grid, ResolutionRule) {
  const ScalarProfile coarse = grid_profile({1, 2}, {1, 1}, {0.5, 0.5}, 64, SampleModel::point);
  const PlaneWaveBasis ok = build_basis(coarse.lattice(), 7);  // needs 60
  EXPECT_NO_THROW(PhaseIndicators(ok, coarse.geometry(), 2));
  const PlaneWaveBasis too_big = build_basis(coarse.lattice(), 8);  // needs 68
  EXPECT_THROW(PhaseIndicators(too_big, coarse.geometry(), 2), ResolutionError);
}

TEST(Inclusion, DiskMatchesFineGrid) {
  const Lattice lat = Lattice::cubic(2, 1.0);
  const SphereInclusion disk{0, 1, 0.3};
  PhaseGrid grid;
  const int r = 1024;
  grid.resolution = {r, r};
  grid.model = SampleModel::point;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      const double x = (i + 0.5) / r - 0.5;
      const double y = (j + 0.5) / r - 0.5;
      grid.labels.push_back(x * x + y * y < 0.09 ? 0 : 1);
    }
  for (const MultiIndex n : {MultiIndex{0, 0, 0}, MultiIndex{1, 0, 0}, MultiIndex{1, 1, 0}, MultiIndex{2, -1, 0}}) {
    const cplx exact = indicator_coefficient(lat, disk, 0, n);
    const cplx sampled = indicator_coefficient(lat, grid, 0, n);
    EXPECT_LT(std::abs(exact - sampled), 2e-4) << n[0] << "," << n[1];
    EXPECT_NEAR(exact.imag(), 0.0, 1e-15);
  }
  EXPECT_NEAR(indicator_coefficient(lat, disk, 0, {0, 0, 0}).real(), kPi * 0.09, 1e-14);
  EXPECT_NEAR(indicator_coefficient(lat, disk, 1, {0, 0, 0}).real(), 1 - kPi * 0.09, 1e-14);
}

TEST(Inclusion, SphereFormFactorAndFit) {
  const Lattice lat = Lattice::cubic(3, 1.0);
  const SphereInclusion sphere{0, 1, 0.25};
  const double f = 4.0 / 3.0 * kPi * std::pow(0.25, 3);
  EXPECT_NEAR(indicator_coefficient(lat, sphere, 0, {0, 0, 0}).real(), f, 1e-15);
  const double x = 2 * kPi * 0.25;
  const double form = 3 * (std::sin(x) - x * std::cos(x)) / (x * x * x);
  EXPECT_NEAR(indicator_coefficient(lat, sphere, 0, {1, 0, 0}).real(), -f * form, 1e-15);
  EXPECT_NEAR(indicator_coefficient(lat, sphere, 0, {0, 1, 0}).real(),
              indicator_coefficient(lat, sphere, 0, {0, 0, -1}).real(), 1e-15);
  EXPECT_THROW(validate_geometry(lat, SphereInclusion{0, 1, 0.6}, 2), InvalidProfile);
}

TEST(Profile, Validation) {
  EXPECT_THROW(ScalarProfile::layered({1.0, -1.0}, {1, 1}, {0.5, 0.5}), InvalidProfile);
  EXPECT_THROW(ScalarProfile::layered({1.0, 1.0}, {1, 0}, {0.5, 0.5}), InvalidProfile);
  EXPECT_THROW(ScalarProfile::layered({1.0, 1.0}, {1, 1}, {0.5, -0.5}), InvalidProfile);
  LayerStack bad{{{0, 0.5}, {3, 0.5}}};
  EXPECT_THROW(ScalarProfile(Lattice::line(1.0), {ScalarPhase::isotropic("a", 1, 1, 1)}, bad),
               InvalidProfile);
  LayerStack short_stack{{{0, 0.5}}};
  EXPECT_THROW(ScalarProfile(Lattice::line(1.0), {ScalarPhase::isotropic("a", 1, 1, 1)}, short_stack),
               InvalidProfile);
}

TEST(Profile, UniformCellAverage) {
  const auto avg = cell_average(ScalarProfile::layered({2.0}, {3.0}, {1.0}));
  EXPECT_EQ(avg.mu(0, 0), cplx(2.0));
  EXPECT_EQ(avg.rho, cplx(3.0));
}
