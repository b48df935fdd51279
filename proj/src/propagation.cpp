#include "holo3d/propagation.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace holo3d {
namespace {

Grid2D padded(const Grid2D& grid, int padding) { return Grid2D{grid.nx * padding, grid.ny * padding, grid.pitch}; }

Grid2D checked_padded_grid(const OpticalSetup& setup, const PropagatorOptions& options) {
  setup.validate();
  if (options.padding < 1) throw ParameterError("padding factor must be >= 1");
  return padded(setup.grid, options.padding);
}

void check_matches(const Volume& object, const OpticalSetup& setup) {
  if (!(object.grid() == setup.grid)) throw DimensionError("volume grid does not match propagator grid");
  if (object.zplanes() != setup.zplanes) throw DimensionError("volume planes do not match propagator planes");
}

}  // namespace

double dft_frequency(Index i, Index n, double pitch) {
  const Index m = i < (n + 1) / 2 ? i : i - n;
  return static_cast<double>(m) / (static_cast<double>(n) * pitch);
}

Eigen::ArrayXXcd fresnel_transfer(const Grid2D& grid, double wavelength, double z) {
  grid.validate();
  if (!(wavelength > 0.0)) throw ParameterError("wavelength must be positive");
  const double k = 2.0 * std::numbers::pi / wavelength;
  const double chirp = std::numbers::pi * wavelength;
  Eigen::ArrayXXcd t(grid.nx, grid.ny);
  for (Index y = 0; y < grid.ny; ++y) {
    const double fy = dft_frequency(y, grid.ny, grid.pitch);
    for (Index x = 0; x < grid.nx; ++x) {
      const double fx = dft_frequency(x, grid.nx, grid.pitch);
      // z factored out so that flipping the sign of z conjugates the entry exactly.
      t(x, y) = std::polar(1.0, z * (k - chirp * (fx * fx + fy * fy)));
    }
  }
  return t;
}

Eigen::ArrayXXcd angular_spectrum_transfer(const Grid2D& grid, double wavelength, double z) {
  grid.validate();
  if (!(wavelength > 0.0)) throw ParameterError("wavelength must be positive");
  const double k = 2.0 * std::numbers::pi / wavelength;
  const double two_pi = 2.0 * std::numbers::pi;
  Eigen::ArrayXXcd t(grid.nx, grid.ny);
  for (Index y = 0; y < grid.ny; ++y) {
    const double ky = two_pi * dft_frequency(y, grid.ny, grid.pitch);
    for (Index x = 0; x < grid.nx; ++x) {
      const double kx = two_pi * dft_frequency(x, grid.nx, grid.pitch);
      const double kz2 = k * k - kx * kx - ky * ky;
      t(x, y) = kz2 > 0.0 ? std::polar(1.0, z * std::sqrt(kz2)) : std::complex<double>(0.0, 0.0);
    }
  }
  return t;
}

Eigen::ArrayXXcd transfer_function(TransferKind kind, const Grid2D& grid, double wavelength, double z) {
  switch (kind) {
    case TransferKind::fresnel:
      return fresnel_transfer(grid, wavelength, z);
    case TransferKind::angular_spectrum:
      return angular_spectrum_transfer(grid, wavelength, z);
  }
  throw ParameterError("unknown transfer kind");
}

ComplexField propagate(const ComplexField& field, double z, const OpticalSetup& setup, TransferKind kind) {
  if (!(field.grid() == setup.grid)) throw DimensionError("propagate: field grid does not match setup grid");
  const Fft2d fft(setup.grid.nx, setup.grid.ny);
  const double inv_n = 1.0 / static_cast<double>(setup.grid.size());
  Eigen::ArrayXXcd spectrum = field.values();
  fft.forward(spectrum);
  spectrum *= transfer_function(kind, setup.grid, setup.wavelength, z) * inv_n;
  fft.backward(spectrum);
  return ComplexField(setup.grid, std::move(spectrum));
}

PropagatorPlan::PropagatorPlan(OpticalSetup setup, PropagatorOptions options)
    : setup_(std::move(setup)),
      options_(options),
      padded_grid_(checked_padded_grid(setup_, options_)),
      fft_(padded_grid_.nx, padded_grid_.ny) {
  offset_x_ = (padded_grid_.nx - setup_.grid.nx) / 2;
  offset_y_ = (padded_grid_.ny - setup_.grid.ny) / 2;

  const double k = setup_.wavenumber();
  const double z_ref = setup_.reference_plane();
  transfer_.reserve(setup_.zplanes.size());
  phase_.reserve(setup_.zplanes.size());
  for (double zc : setup_.zplanes) {
    transfer_.push_back(transfer_function(options_.kind, padded_grid_, setup_.wavelength, setup_.z_detector - zc));
    phase_.push_back(std::polar(1.0, k * (zc - z_ref)));
  }
}

Eigen::ArrayXXcd PropagatorPlan::pad(const Eigen::Ref<const Eigen::ArrayXXcd>& plane) const {
  Eigen::ArrayXXcd out = Eigen::ArrayXXcd::Zero(padded_grid_.nx, padded_grid_.ny);
  out.block(offset_x_, offset_y_, setup_.grid.nx, setup_.grid.ny) = plane;
  return out;
}

Eigen::ArrayXXcd PropagatorPlan::crop(const Eigen::Ref<const Eigen::ArrayXXcd>& padded_plane) const {
  return padded_plane.block(offset_x_, offset_y_, setup_.grid.nx, setup_.grid.ny);
}

ComplexField forward(const Volume& object, const PropagatorPlan& plan) {
  check_matches(object, plan.setup());
  const Grid2D& pg = plan.padded_grid();
  const double inv_n = 1.0 / static_cast<double>(pg.size());
  const bool padded_run = plan.padding() > 1;

  // Accumulate every slice's contribution in the frequency domain, then one inverse transform.
  Eigen::ArrayXXcd accum = Eigen::ArrayXXcd::Zero(pg.nx, pg.ny);
  Eigen::ArrayXXcd slice(pg.nx, pg.ny);
  for (Index c = 0; c < plan.num_planes(); ++c) {
    if (padded_run)
      slice = plan.pad(object.plane(c));
    else
      slice = object.plane(c);
    plan.fft().forward(slice);
    accum += (plan.illumination_phase(c) * inv_n) * plan.transfer(c) * slice;
  }
  plan.fft().backward(accum);
  if (padded_run) return ComplexField(plan.grid(), plan.crop(accum));
  return ComplexField(plan.grid(), std::move(accum));
}

Volume adjoint(const ComplexField& field, const PropagatorPlan& plan) {
  if (!(field.grid() == plan.grid())) throw DimensionError("adjoint: field grid does not match propagator grid");
  const Grid2D& pg = plan.padded_grid();
  const double inv_n = 1.0 / static_cast<double>(pg.size());
  const bool padded_run = plan.padding() > 1;

  Eigen::ArrayXXcd spectrum = padded_run ? plan.pad(field.values()) : Eigen::ArrayXXcd(field.values());
  plan.fft().forward(spectrum);

  Volume out = plan.make_volume();
  Eigen::ArrayXXcd slice(pg.nx, pg.ny);
  for (Index c = 0; c < plan.num_planes(); ++c) {
    slice = (std::conj(plan.illumination_phase(c)) * inv_n) * plan.transfer(c).conjugate() * spectrum;
    plan.fft().backward(slice);
    if (padded_run)
      out.plane(c) = plan.crop(slice);
    else
      out.plane(c) = slice;
  }
  return out;
}

}  // namespace holo3d
