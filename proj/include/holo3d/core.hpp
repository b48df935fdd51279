// Grid, field and volume types shared by every holo3d module.
//
// Storage follows Eigen's column-major convention: within a plane the x index
// runs fastest, then y; a volume stores its planes back to back. This is the
// same ordering used by the on-disk payloads.

#ifndef HOLO3D_CORE_HPP
#define HOLO3D_CORE_HPP

#include <complex>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "holo3d/errors.hpp"

namespace holo3d {

using Index = Eigen::Index;

/// Uniform transverse sampling grid. Pitch is in micrometers and identical in x and y.
struct Grid2D {
  Index nx = 0;
  Index ny = 0;
  double pitch = 0.0;

  Index size() const { return nx * ny; }
  double extent_x() const { return static_cast<double>(nx) * pitch; }
  double extent_y() const { return static_cast<double>(ny) * pitch; }

  void validate() const {
    if (nx < 1 || ny < 1) throw ParameterError("grid dimensions must be positive");
    if (!(pitch > 0.0) || !std::isfinite(pitch)) throw ParameterError("grid pitch must be positive");
  }

  friend bool operator==(const Grid2D&, const Grid2D&) = default;
};

/// A sampled complex field on a Grid2D: detector data, or one object slice.
template <typename Real>
class BasicField {
 public:
  using Scalar = std::complex<Real>;
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  BasicField() = default;

  explicit BasicField(const Grid2D& grid) : grid_(grid) {
    grid_.validate();
    values_ = Array::Zero(grid_.nx, grid_.ny);
  }

  BasicField(const Grid2D& grid, Array values) : grid_(grid), values_(std::move(values)) {
    grid_.validate();
    if (values_.rows() != grid_.nx || values_.cols() != grid_.ny)
      throw DimensionError("field values do not match grid " + std::to_string(grid_.nx) + "x" +
                           std::to_string(grid_.ny));
    if (!values_.allFinite()) throw ParameterError("field contains non-finite values");
  }

  const Grid2D& grid() const { return grid_; }
  const Array& values() const { return values_; }
  Array& values() { return values_; }

  Scalar& operator()(Index x, Index y) { return values_(x, y); }
  const Scalar& operator()(Index x, Index y) const { return values_(x, y); }

 private:
  Grid2D grid_;
  Array values_;
};

/// Complex voxel array: a stack of planes on a shared transverse grid with
/// strictly increasing axial positions (micrometers). The last plane is the
/// illumination reference plane.
template <typename Real>
class BasicVolume {
 public:
  using Scalar = std::complex<Real>;
  using Plane = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Storage = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using PlaneMap = Eigen::Map<Plane>;
  using ConstPlaneMap = Eigen::Map<const Plane>;

  BasicVolume() = default;

  BasicVolume(const Grid2D& grid, std::vector<double> zplanes) : grid_(grid), zplanes_(std::move(zplanes)) {
    grid_.validate();
    validate_zplanes(zplanes_);
    data_ = Storage::Zero(grid_.size(), static_cast<Index>(zplanes_.size()));
  }

  const Grid2D& grid() const { return grid_; }
  const std::vector<double>& zplanes() const { return zplanes_; }
  Index num_planes() const { return static_cast<Index>(zplanes_.size()); }
  double reference_plane() const { return zplanes_.back(); }

  /// nx·ny rows by Mz columns; column c is plane c flattened x-fastest.
  const Storage& data() const { return data_; }
  Storage& data() { return data_; }

  PlaneMap plane(Index c) { return PlaneMap(data_.col(c).data(), grid_.nx, grid_.ny); }
  ConstPlaneMap plane(Index c) const { return ConstPlaneMap(data_.col(c).data(), grid_.nx, grid_.ny); }

  Scalar& operator()(Index x, Index y, Index c) { return data_(x + y * grid_.nx, c); }
  const Scalar& operator()(Index x, Index y, Index c) const { return data_(x + y * grid_.nx, c); }

  bool same_shape(const BasicVolume& other) const {
    return grid_ == other.grid_ && zplanes_ == other.zplanes_;
  }

  static void validate_zplanes(const std::vector<double>& z) {
    if (z.empty()) throw ParameterError("volume needs at least one plane");
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (!std::isfinite(z[i])) throw ParameterError("non-finite plane position");
      if (i > 0 && !(z[i] > z[i - 1])) throw ParameterError("plane positions must be strictly increasing");
    }
  }

 private:
  Grid2D grid_;
  std::vector<double> zplanes_;
  Storage data_;
};

using ComplexField = BasicField<double>;
using Volume = BasicVolume<double>;

/// Wavelength and positions in micrometers. The detector sits beyond the last plane.
struct OpticalSetup {
  double wavelength = 0.0;
  Grid2D grid;
  std::vector<double> zplanes;
  double z_detector = 0.0;

  double wavenumber() const { return 2.0 * std::numbers::pi / wavelength; }
  Index num_planes() const { return static_cast<Index>(zplanes.size()); }
  double reference_plane() const { return zplanes.back(); }

  void validate() const {
    grid.validate();
    if (grid.nx < 2 || grid.ny < 2) throw ParameterError("optical grid needs at least 2x2 samples");
    if (!(wavelength > 0.0) || !std::isfinite(wavelength)) throw ParameterError("wavelength must be positive");
    Volume::validate_zplanes(zplanes);
    if (!(z_detector > zplanes.back())) throw ParameterError("detector must lie beyond the last object plane");
  }

  friend bool operator==(const OpticalSetup&, const OpticalSetup&) = default;
};

// Inner products are conjugate-linear in the first argument, unit sample weights.

template <typename Real>
std::complex<Real> inner_product(const BasicField<Real>& a, const BasicField<Real>& b) {
  if (!(a.grid() == b.grid())) throw DimensionError("inner product: grid mismatch");
  return (a.values().conjugate() * b.values()).sum();
}

template <typename Real>
std::complex<Real> inner_product(const BasicVolume<Real>& a, const BasicVolume<Real>& b) {
  if (!a.same_shape(b)) throw DimensionError("inner product: volume shape mismatch");
  return (a.data().conjugate() * b.data()).sum();
}

template <typename Real>
Real frobenius_norm(const BasicField<Real>& x) {
  return std::sqrt(x.values().abs2().sum());
}

template <typename Real>
Real frobenius_norm(const BasicVolume<Real>& x) {
  return std::sqrt(x.data().abs2().sum());
}

/// A zero volume laid out on the setup's grid and planes.
Volume zero_volume(const OpticalSetup& setup);
ComplexField zero_field(const OpticalSetup& setup);

}  // namespace holo3d

#endif  // HOLO3D_CORE_HPP
