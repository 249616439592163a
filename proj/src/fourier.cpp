#include "willis/fourier.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "willis/errors.hpp"

namespace willis {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// exp(-2*pi*i*s), with s reduced first so integer arguments give exactly 1.
cplx unit_phase(double s) {
  s -= std::round(s);
  return std::polar(1.0, -kTwoPi * s);
}

double sphere_form_factor(double x) {
  if (x < 1e-3) {
    const double x2 = x * x;
    return 1.0 - x2 / 10.0 + x2 * x2 / 280.0;
  }
  return 3.0 * (std::sin(x) - x * std::cos(x)) / (x * x * x);
}

double disk_form_factor(double x) {
  if (x < 1e-3) {
    const double x2 = x * x;
    return 1.0 - x2 / 8.0 + x2 * x2 / 192.0;
  }
  return 2.0 * std::cyl_bessel_j(1.0, x) / x;
}

// Layer boundaries in fractional coordinates; the last one is pinned to 1 so
// that a whole-cell layer has vanishing coefficients at every n != 0.
std::vector<double> layer_boundaries(std::span<const double> thickness) {
  double total = 0.0;
  for (double h : thickness) total += h;
  std::vector<double> t(thickness.size() + 1, 0.0);
  double run = 0.0;
  for (std::size_t l = 0; l < thickness.size(); ++l) {
    run += thickness[l];
    t[l + 1] = run / total;
  }
  t.back() = 1.0;
  return t;
}

// Coefficient at (possibly non-integer) frequency nu in units of 2*pi/T.
cplx layered_at(std::span<const cplx> values, std::span<const double> thickness, double nu) {
  const auto t = layer_boundaries(thickness);
  if (nu == 0.0) {
    cplx mean = 0.0;
    for (std::size_t l = 0; l < values.size(); ++l) mean += values[l] * (t[l + 1] - t[l]);
    return mean;
  }
  cplx sum = 0.0;
  for (std::size_t l = 0; l < values.size(); ++l)
    sum += values[l] * (unit_phase(nu * t[l]) - unit_phase(nu * t[l + 1]));
  return sum / cplx(0.0, kTwoPi * nu);
}

std::size_t cell_count(const std::vector<int>& resolution) {
  std::size_t count = 1;
  for (int r : resolution) count *= static_cast<std::size_t>(r);
  return count;
}

// Visits every sample with its phase factor exp(-2*pi*i n.t).
template <class Visit>
void for_each_sample(const std::vector<int>& resolution, const MultiIndex& n, Visit&& visit) {
  const int d = static_cast<int>(resolution.size());
  std::vector<std::vector<cplx>> axis(d);
  for (int j = 0; j < d; ++j) {
    axis[j].resize(resolution[j]);
    for (int i = 0; i < resolution[j]; ++i)
      axis[j][i] = unit_phase(n[j] * (i + 0.5) / resolution[j]);
  }
  const std::size_t count = cell_count(resolution);
  std::vector<int> idx(d, 0);
  for (std::size_t flat = 0; flat < count; ++flat) {
    cplx phase = 1.0;
    for (int j = 0; j < d; ++j) phase *= axis[j][idx[j]];
    visit(flat, phase);
    for (int j = d - 1; j >= 0; --j) {
      if (++idx[j] < resolution[j]) break;
      idx[j] = 0;
    }
  }
}

double voxel_factor(const std::vector<int>& resolution, const MultiIndex& n, SampleModel model) {
  if (model == SampleModel::point) return 1.0;
  double f = 1.0;
  for (std::size_t j = 0; j < resolution.size(); ++j) {
    if (n[j] == 0) continue;
    const double x = std::numbers::pi * n[j] / resolution[j];
    f *= std::sin(x) / x;
  }
  return f;
}

void check_nyquist(const std::vector<int>& resolution, const MultiIndex& n) {
  for (std::size_t j = 0; j < resolution.size(); ++j)
    if (2 * std::abs(n[j]) >= resolution[j])
      throw ResolutionError("grid too coarse for requested reciprocal vector");
}

}  // namespace

cplx fourier_layered(std::span<const LayerValue> layers, double g) {
  std::vector<cplx> values;
  std::vector<double> thickness;
  double period = 0.0;
  for (const auto& l : layers) {
    values.push_back(l.value);
    thickness.push_back(l.thickness);
    period += l.thickness;
  }
  double nu = g * period / kTwoPi;
  if (std::abs(nu - std::round(nu)) <= 1e-12 * std::max(1.0, std::abs(nu))) nu = std::round(nu);
  return layered_at(values, thickness, nu);
}

cplx fourier_grid(const SampledField& field, const MultiIndex& n, SampleModel model) {
  if (field.values.size() != cell_count(field.resolution))
    throw InvalidArgument("sample count does not match grid resolution");
  check_nyquist(field.resolution, n);
  cplx sum = 0.0;
  for_each_sample(field.resolution, n,
                  [&](std::size_t flat, cplx phase) { sum += field.values[flat] * phase; });
  return sum / static_cast<double>(field.values.size()) *
         voxel_factor(field.resolution, n, model);
}

void validate_geometry(const Lattice& lattice, const Geometry& geometry, std::size_t phase_count) {
  const int d = lattice.dimension();
  if (const auto* stack = std::get_if<LayerStack>(&geometry)) {
    if (d != 1) throw InvalidProfile("layer stacks require a 1D lattice");
    if (stack->layers.empty()) throw InvalidProfile("layer stack is empty");
    double total = 0.0;
    for (const auto& l : stack->layers) {
      if (!(l.thickness > 0.0)) throw InvalidProfile("layer thickness must be positive");
      if (l.phase >= phase_count) throw InvalidProfile("layer references an undefined phase");
      total += l.thickness;
    }
    const double period = lattice.volume();
    if (std::abs(total - period) > 1e-12 * period)
      throw InvalidProfile("layer thicknesses do not sum to the period");
  } else if (const auto* grid = std::get_if<PhaseGrid>(&geometry)) {
    if (static_cast<int>(grid->resolution.size()) != d)
      throw InvalidProfile("grid resolution must have one entry per axis");
    for (int r : grid->resolution)
      if (r < 1) throw InvalidProfile("grid resolution must be positive");
    if (grid->labels.size() != cell_count(grid->resolution))
      throw InvalidProfile("grid label count does not match resolution");
    for (auto p : grid->labels)
      if (p >= phase_count) throw InvalidProfile("grid references an undefined phase");
  } else {
    const auto& s = std::get<SphereInclusion>(geometry);
    if (d < 2) throw InvalidProfile("inclusions need a 2D or 3D lattice");
    if (s.inclusion >= phase_count || s.matrix >= phase_count || s.inclusion == s.matrix)
      throw InvalidProfile("inclusion and matrix must be two distinct defined phases");
    double half_width = std::numeric_limits<double>::infinity();
    for (int j = 0; j < d; ++j)
      half_width = std::min(half_width, 0.5 / lattice.reciprocal().col(j).norm());
    if (!(s.radius > 0.0) || s.radius > half_width)
      throw InvalidProfile("inclusion radius must be positive and fit inside the cell");
  }
}

cplx indicator_coefficient(const Lattice& lattice, const Geometry& geometry, std::size_t phase,
                           const MultiIndex& n) {
  const int d = lattice.dimension();
  if (const auto* stack = std::get_if<LayerStack>(&geometry)) {
    std::vector<cplx> values;
    std::vector<double> thickness;
    for (const auto& l : stack->layers) {
      values.push_back(l.phase == phase ? 1.0 : 0.0);
      thickness.push_back(l.thickness);
    }
    return layered_at(values, thickness, n[0]);
  }
  if (const auto* grid = std::get_if<PhaseGrid>(&geometry)) {
    check_nyquist(grid->resolution, n);
    cplx sum = 0.0;
    for_each_sample(grid->resolution, n, [&](std::size_t flat, cplx phase_factor) {
      if (grid->labels[flat] == phase) sum += phase_factor;
    });
    return sum / static_cast<double>(grid->labels.size()) *
           voxel_factor(grid->resolution, n, grid->model);
  }
  const auto& s = std::get<SphereInclusion>(geometry);
  if (phase != s.inclusion && phase != s.matrix) return 0.0;
  const double x = lattice.wavevector(n).norm() * s.radius;
  const double fraction = d == 3 ? 4.0 / 3.0 * std::numbers::pi * std::pow(s.radius, 3) / lattice.volume()
                                 : std::numbers::pi * s.radius * s.radius / lattice.volume();
  const int parity = (n[0] + n[1] + n[2]) % 2 == 0 ? 1 : -1;
  const double inclusion = fraction * (d == 3 ? sphere_form_factor(x) : disk_form_factor(x)) * parity;
  if (phase == s.inclusion) return inclusion;
  const bool origin = n[0] == 0 && n[1] == 0 && n[2] == 0;
  return (origin ? 1.0 : 0.0) - inclusion;
}

PhaseIndicators::PhaseIndicators(const PlaneWaveBasis& basis, const Geometry& geometry,
                                 std::size_t phase_count) {
  validate_geometry(basis.lattice(), geometry, phase_count);
  if (const auto* grid = std::get_if<PhaseGrid>(&geometry)) {
    const int need = 4 * (2 * basis.truncation() + 1);
    for (int r : grid->resolution)
      if (r < need)
        throw ResolutionError("grid needs at least " + std::to_string(need) +
                              " samples per axis for N = " + std::to_string(basis.truncation()));
  }
  const std::size_t slots = basis.difference_count();
  table_.resize(static_cast<Eigen::Index>(slots), static_cast<Eigen::Index>(phase_count));
  for (std::size_t s = 0; s < slots; ++s) {
    const MultiIndex m = basis.difference_index(s);
    for (std::size_t p = 0; p < phase_count; ++p)
      table_(s, p) = indicator_coefficient(basis.lattice(), geometry, p, m);
  }
}

}  // namespace willis
