// Sparsity penalties and their proximity operators.
//
// TV uses backward differences within each plane; a difference that would
// reach outside the plane is zero (Neumann boundary). The FGP dual iteration
// is written against exactly that difference operator, so the penalty that
// tv_slice() reports is the one prox_tv() minimizes.

#ifndef HOLO3D_REGULARIZERS_HPP
#define HOLO3D_REGULARIZERS_HPP

#include <vector>

#include <Eigen/Core>

#include "holo3d/core.hpp"

namespace holo3d {

enum class RegularizerKind {
  l1_positive,   ///< ‖U‖₁ plus the indicator of the real nonnegative orthant
  tv_slicewise,  ///< Σ_c TV(U_c), isotropic, complex moduli
};

/// How the TV prox treats the real and imaginary parts of a plane.
enum class TvCoupling {
  joint,        ///< TV of the complex moduli, the same functional tv_slice() evaluates
  channelwise,  ///< independent TV on the real part and on the imaginary part
};

struct Regularizer {
  RegularizerKind kind = RegularizerKind::l1_positive;
  int tv_inner_iterations = 50;
  TvCoupling tv_coupling = TvCoupling::joint;

  static Regularizer l1_positive() { return {RegularizerKind::l1_positive, 50, TvCoupling::joint}; }
  static Regularizer tv(int inner_iterations = 50, TvCoupling coupling = TvCoupling::joint) {
    return {RegularizerKind::tv_slicewise, inner_iterations, coupling};
  }

  void validate() const {
    if (kind == RegularizerKind::tv_slicewise && tv_inner_iterations < 1)
      throw ParameterError("TV prox needs at least one inner iteration");
  }

  friend bool operator==(const Regularizer&, const Regularizer&) = default;
};

double l1_norm(const Volume& volume);

/// Σ_{a,b} sqrt(|P_ab - P_{a-1,b}|² + |P_ab - P_{a,b-1}|²).
double tv_slice(const Eigen::Ref<const Eigen::ArrayXXcd>& plane);
inline double tv_slice(const ComplexField& plane) { return tv_slice(plane.values()); }

/// Sum of tv_slice over all planes.
double tv_norm(const Volume& volume);

/// The configured penalty C₂. For l1_positive this is +inf when any voxel
/// leaves the real nonnegative orthant.
double penalty(const Volume& volume, const Regularizer& reg);

/// Voxelwise Re(u) - mu where Re(u) >= mu, else 0. The result is real and nonnegative.
Volume prox_l1_positive(const Volume& volume, double mu);

/// argmin_L mu·TV(L) + ½‖L - b‖² for one real image, by `iterations` FGP steps.
Eigen::ArrayXXd fgp_tv_denoise(const Eigen::Ref<const Eigen::ArrayXXd>& image, double mu, int iterations);

/// Same for a complex image, with TV taken on complex moduli (dual projected jointly).
Eigen::ArrayXXcd fgp_tv_denoise(const Eigen::Ref<const Eigen::ArrayXXcd>& image, double mu, int iterations);

/// FGP dual fields from a previous prox_tv call, one pair per plane and channel.
/// Passing the same state to successive calls on slowly changing inputs starts
/// each solve near its answer.
struct TvDualState {
  std::vector<Eigen::ArrayXXd> p1;
  std::vector<Eigen::ArrayXXd> p2;
};

/// Plane-by-plane TV prox by FGP, coupling the real and imaginary parts as reg.tv_coupling says.
/// With `warm` set, the duals start from (and are saved back to) that state.
Volume prox_tv(const Volume& volume, double mu, const Regularizer& reg, TvDualState* warm = nullptr);

/// Dispatches to the prox of the configured penalty, scaled by mu. `warm` is used by TV only.
Volume prox(const Volume& volume, double mu, const Regularizer& reg, TvDualState* warm = nullptr);

}  // namespace holo3d

#endif  // HOLO3D_REGULARIZERS_HPP
