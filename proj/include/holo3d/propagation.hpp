// Hologram formation (volume -> detector field) and its Hermitian adjoint
// (holographic replay), built from a frequency-domain Fresnel propagator.
//
// Every transform pair uses unnormalized FFTW transforms with the 1/N factor
// folded into the transfer multiplier, so a single-slice propagation is
// unitary and forward/adjoint are an exact transpose pair under the
// unit-weight inner products of core.hpp.

#ifndef HOLO3D_PROPAGATION_HPP
#define HOLO3D_PROPAGATION_HPP

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "holo3d/core.hpp"
#include "holo3d/fft.hpp"

namespace holo3d {

enum class TransferKind {
  fresnel,           ///< paraxial, pure phase
  angular_spectrum,  ///< exact dispersion relation, evanescent band set to zero
};

/// Spatial frequency in cycles/µm of DFT index `i` on an `n`-sample axis: m/(n·pitch), m in [-n/2, n/2).
double dft_frequency(Index i, Index n, double pitch);

/// T(fx, fy; z) = exp(ikz)·exp(-iπλz(fx² + fy²)), in DFT index order.
Eigen::ArrayXXcd fresnel_transfer(const Grid2D& grid, double wavelength, double z);

/// exp(i·z·sqrt(k² - 4π²(fx² + fy²))) on the propagating band, 0 elsewhere.
Eigen::ArrayXXcd angular_spectrum_transfer(const Grid2D& grid, double wavelength, double z);

Eigen::ArrayXXcd transfer_function(TransferKind kind, const Grid2D& grid, double wavelength, double z);

/// Free-space propagation of one plane by `z` micrometers (negative z propagates backwards).
/// Periodic boundary; unitary for the Fresnel kernel.
ComplexField propagate(const ComplexField& field, double z, const OpticalSetup& setup,
                       TransferKind kind = TransferKind::fresnel);

struct PropagatorOptions {
  int padding = 1;  ///< 1 = periodic; P >= 2 zero-pads each plane to P·n before propagating
  TransferKind kind = TransferKind::fresnel;

  friend bool operator==(const PropagatorOptions&, const PropagatorOptions&) = default;
};

/// Precomputed per-plane transfer multipliers and illumination phases for one geometry.
/// Immutable after construction and safe to share between threads.
class PropagatorPlan {
 public:
  explicit PropagatorPlan(OpticalSetup setup, PropagatorOptions options = {});

  const OpticalSetup& setup() const { return setup_; }
  const PropagatorOptions& options() const { return options_; }
  int padding() const { return options_.padding; }
  const Grid2D& grid() const { return setup_.grid; }
  const Grid2D& padded_grid() const { return padded_grid_; }
  Index num_planes() const { return setup_.num_planes(); }

  /// Transfer multiplier from plane c to the detector, sampled on the padded grid.
  const Eigen::ArrayXXcd& transfer(Index c) const { return transfer_[static_cast<std::size_t>(c)]; }
  /// exp(ik(z'_c - z_ref)), with z_ref the last plane.
  std::complex<double> illumination_phase(Index c) const { return phase_[static_cast<std::size_t>(c)]; }

  const Fft2d& fft() const { return fft_; }

  Volume make_volume() const { return zero_volume(setup_); }
  ComplexField make_field() const { return zero_field(setup_); }

  // Zero-pad / crop between the object grid and the padded grid (centered).
  Eigen::ArrayXXcd pad(const Eigen::Ref<const Eigen::ArrayXXcd>& plane) const;
  Eigen::ArrayXXcd crop(const Eigen::Ref<const Eigen::ArrayXXcd>& padded) const;

 private:
  OpticalSetup setup_;
  PropagatorOptions options_;
  Grid2D padded_grid_;
  Index offset_x_ = 0;
  Index offset_y_ = 0;
  std::vector<Eigen::ArrayXXcd> transfer_;
  std::vector<std::complex<double>> phase_;
  Fft2d fft_;
};

/// V = Σ_c φ_c · propagate(U_c, z_d - z'_c).
ComplexField forward(const Volume& object, const PropagatorPlan& plan);

/// (A†V)_c = conj(φ_c) · propagate(V, -(z_d - z'_c)).
Volume adjoint(const ComplexField& field, const PropagatorPlan& plan);

/// Holographic replay of a detector field into the volume; identical to adjoint().
inline Volume backproject(const ComplexField& field, const PropagatorPlan& plan) { return adjoint(field, plan); }

}  // namespace holo3d

#endif  // HOLO3D_PROPAGATION_HPP
