#ifndef HOLO3D_METRICS_HPP
#define HOLO3D_METRICS_HPP

#include "holo3d/core.hpp"
#include "holo3d/propagation.hpp"

namespace holo3d {

/// ‖truth - estimate‖_F / ‖truth‖_F. Throws MetricError for a zero truth.
double object_domain_error(const Volume& truth, const Volume& estimate);

/// ‖V - A·estimate‖_F / ‖V‖_F. Throws MetricError for a zero field.
double data_domain_error(const ComplexField& data, const Volume& estimate, const PropagatorPlan& plan);

/// Same as above with A·estimate already evaluated.
double data_domain_error(const ComplexField& data, const ComplexField& predicted);

/// Magnitude statistics split by the support (nonzero voxels) of a reference volume.
struct SupportContrast {
  double median_on_support = 0.0;
  double median_off_support = 0.0;
  /// median_off_support / median_on_support
  double ratio = 0.0;
};

SupportContrast support_contrast(const Volume& truth, const Volume& estimate);

}  // namespace holo3d

#endif  // HOLO3D_METRICS_HPP
