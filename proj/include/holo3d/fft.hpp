// In-place 2D DFT on column-major (x-fastest) complex planes, backed by FFTW.
// Both directions are unnormalized; callers fold the 1/N factor into their
// frequency-domain multipliers.

#ifndef HOLO3D_FFT_HPP
#define HOLO3D_FFT_HPP

#include <complex>
#include <memory>

#include <Eigen/Core>

namespace holo3d {

class Fft2d {
 public:
  Fft2d(Eigen::Index nx, Eigen::Index ny);

  Eigen::Index nx() const { return nx_; }
  Eigen::Index ny() const { return ny_; }
  Eigen::Index size() const { return nx_ * ny_; }

  // data must hold nx*ny contiguous values.
  void forward(std::complex<double>* data) const;
  void backward(std::complex<double>* data) const;

  template <typename Derived>
  void forward(Eigen::DenseBase<Derived>& a) const {
    forward(a.derived().data());
  }
  template <typename Derived>
  void backward(Eigen::DenseBase<Derived>& a) const {
    backward(a.derived().data());
  }

 private:
  struct Plans;
  Eigen::Index nx_;
  Eigen::Index ny_;
  std::shared_ptr<const Plans> plans_;
};

}  // namespace holo3d

#endif  // HOLO3D_FFT_HPP
