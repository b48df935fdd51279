// Test objects and the simulation geometry they were designed for.

#ifndef HOLO3D_PHANTOMS_HPP
#define HOLO3D_PHANTOMS_HPP

#include <vector>

#include "holo3d/core.hpp"

namespace holo3d {

enum class PhantomKind { amplitude_reflectors, text_phase };

/// Plane numbers are 1-based. Grid dimensions and plane positions come from the OpticalSetup.
struct PhantomSpec {
  PhantomKind kind = PhantomKind::amplitude_reflectors;
  std::vector<int> planes = {3, 11, 20, 28};
  int glyph_size = 32;  ///< letter height in pixels (text phantom)

  static PhantomSpec amplitude() { return {PhantomKind::amplitude_reflectors, {3, 11, 20, 28}, 32}; }
  static PhantomSpec text() { return {PhantomKind::text_phase, {1, 10, 20, 30}, 32}; }

  friend bool operator==(const PhantomSpec&, const PhantomSpec&) = default;
};

/// How a box depth is divided among planes.
enum class AxialSpacing {
  voxel_depth,  ///< Δz = depth / Mz; first to last plane spans depth - Δz
  end_to_end,   ///< Δz = depth / (Mz - 1); first to last plane spans depth
};

/// Geometry with planes at z_first + c·dz, c = 0..num_planes-1, and the
/// detector `detector_distance` beyond the last plane.
OpticalSetup make_setup(Index nx, Index ny, double pitch, double wavelength, Index num_planes, double z_first,
                        double dz, double detector_distance);

/// 128×128×30 voxels over 640 µm × 640 µm × 750 µm, λ = 0.5 µm, detector 1060 µm past the last plane.
OpticalSetup make_setup_paper(AxialSpacing spacing = AxialSpacing::voxel_depth);

/// Four 2×2 unit reflectors, one per listed plane, centered in the four transverse quadrants
/// (plane i goes to quadrant i: top-left, top-right, bottom-left, bottom-right).
Volume amplitude_phantom(const PhantomSpec& spec, const OpticalSetup& setup);

/// Letters A, B, C, D (one per listed plane) of unit amplitude and phases 2π/3, π/4, π/3, π/2,
/// drawn from fixed 5×7 bitmaps scaled to `glyph_size` pixels tall. Letter i is centered in
/// quadrant i, the same layout as amplitude_phantom().
Volume text_phase_phantom(const PhantomSpec& spec, const OpticalSetup& setup);

/// Dispatches on spec.kind.
Volume make_phantom(const PhantomSpec& spec, const OpticalSetup& setup);

/// Phase assigned to letter i (0 = A).
double letter_phase(int letter);

}  // namespace holo3d

#endif  // HOLO3D_PHANTOMS_HPP
