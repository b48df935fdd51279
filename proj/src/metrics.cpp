#include "holo3d/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace holo3d {
namespace {

double median(std::vector<double> v) {
  if (v.empty()) throw MetricError("median of an empty set");
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace

double object_domain_error(const Volume& truth, const Volume& estimate) {
  if (!truth.same_shape(estimate)) throw DimensionError("object error: volume shape mismatch");
  const double norm = frobenius_norm(truth);
  if (norm == 0.0) throw MetricError("object error undefined for a zero ground truth");
  return std::sqrt((truth.data() - estimate.data()).abs2().sum()) / norm;
}

double data_domain_error(const ComplexField& data, const ComplexField& predicted) {
  if (!(data.grid() == predicted.grid())) throw DimensionError("data error: grid mismatch");
  const double norm = frobenius_norm(data);
  if (norm == 0.0) throw MetricError("data error undefined for a zero field");
  return std::sqrt((data.values() - predicted.values()).abs2().sum()) / norm;
}

double data_domain_error(const ComplexField& data, const Volume& estimate, const PropagatorPlan& plan) {
  return data_domain_error(data, forward(estimate, plan));
}

SupportContrast support_contrast(const Volume& truth, const Volume& estimate) {
  if (!truth.same_shape(estimate)) throw DimensionError("support contrast: volume shape mismatch");
  std::vector<double> on;
  std::vector<double> off;
  const auto& t = truth.data();
  const auto& e = estimate.data();
  for (Index c = 0; c < t.cols(); ++c) {
    for (Index i = 0; i < t.rows(); ++i) {
      (t(i, c) != 0.0 ? on : off).push_back(std::abs(e(i, c)));
    }
  }
  SupportContrast out;
  out.median_on_support = median(std::move(on));
  out.median_off_support = median(std::move(off));
  out.ratio = out.median_on_support > 0.0 ? out.median_off_support / out.median_on_support
                                          : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace holo3d
