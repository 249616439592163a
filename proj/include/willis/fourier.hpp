#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "willis/lattice.hpp"

namespace willis {

using cplx = std::complex<double>;

// How a grid sample relates to the field it stands for. `point` is the plain
// midpoint DFT, exact for band-limited fields. `cell_average` treats every
// sample as the constant value of its voxel and is exact for voxel fields.
enum class SampleModel { point, cell_average };

// 1D layer list along a_1. Layer l occupies [x_l, x_{l+1}) with x_1 = 0.
struct Layer {
  std::size_t phase = 0;
  double thickness = 0.0;
};
struct LayerStack {
  std::vector<Layer> layers;
};

// Phase labels on a regular mesh of the cell in fractional coordinates,
// first axis slowest. Sample i_j sits at t_j = (i_j + 1/2) / R_j.
struct PhaseGrid {
  std::vector<int> resolution;
  std::vector<std::size_t> labels;
  SampleModel model = SampleModel::point;
};

// Sphere (d = 3) or disk (d = 2) centred in the cell.
struct SphereInclusion {
  std::size_t inclusion = 0;
  std::size_t matrix = 1;
  double radius = 0.0;
};

using Geometry = std::variant<LayerStack, PhaseGrid, SphereInclusion>;

struct LayerValue {
  cplx value;
  double thickness = 0.0;
};

// (1/T) int_0^T h(x) e^{-igx} dx for a piecewise-constant 1D field, T being
// the summed thickness.
cplx fourier_layered(std::span<const LayerValue> layers, double g);

struct SampledField {
  std::vector<int> resolution;
  std::vector<cplx> values;
};

// Midpoint-rule DFT of cell samples at reciprocal multi-index n.
cplx fourier_grid(const SampledField& field, const MultiIndex& n,
                  SampleModel model = SampleModel::point);

// Fourier coefficient of the indicator of `phase` at multi-index n.
cplx indicator_coefficient(const Lattice& lattice, const Geometry& geometry, std::size_t phase,
                           const MultiIndex& n);

// Every field of a profile is constant per phase, so one table of indicator
// coefficients over the doubled box [-2N, 2N]^d feeds all operator entries.
class PhaseIndicators {
 public:
  PhaseIndicators(const PlaneWaveBasis& basis, const Geometry& geometry, std::size_t phase_count);

  std::size_t phase_count() const { return static_cast<std::size_t>(table_.cols()); }
  cplx operator()(std::size_t slot, std::size_t phase) const { return table_(slot, phase); }
  const Eigen::MatrixXcd& table() const { return table_; }

  // Combine per-phase constants into one field's coefficient at `slot`.
  template <class Value, class Getter>
  Value combine(std::size_t slot, Value zero, Getter&& per_phase) const {
    Value out = zero;
    for (std::size_t p = 0; p < phase_count(); ++p) {
      const cplx c = table_(slot, p);
      if (c != cplx(0.0)) out += c * per_phase(p);
    }
    return out;
  }

 private:
  Eigen::MatrixXcd table_;
};

void validate_geometry(const Lattice& lattice, const Geometry& geometry, std::size_t phase_count);

}  // namespace willis
