#include "holo3d/fft.hpp"

#include <mutex>
#include <vector>

#include <fftw3.h>

#include "holo3d/errors.hpp"

namespace holo3d {
namespace {

// The FFTW planner is not thread-safe; execution with new-array calls is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

struct Fft2d::Plans {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }
};

Fft2d::Fft2d(Eigen::Index nx, Eigen::Index ny) : nx_(nx), ny_(ny) {
  if (nx < 1 || ny < 1) throw ParameterError("fft: dimensions must be positive");
  auto plans = std::make_shared<Plans>();
  std::vector<std::complex<double>> scratch(static_cast<std::size_t>(nx * ny));
  // ESTIMATE keeps the chosen algorithm, and therefore every rounding, identical run to run.
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  {
    std::lock_guard lock(planner_mutex());
    // FFTW is row-major: the last dimension is contiguous, so x goes last.
    plans->fwd = fftw_plan_dft_2d(static_cast<int>(ny), static_cast<int>(nx), as_fftw(scratch.data()),
                                  as_fftw(scratch.data()), FFTW_FORWARD, flags);
    plans->bwd = fftw_plan_dft_2d(static_cast<int>(ny), static_cast<int>(nx), as_fftw(scratch.data()),
                                  as_fftw(scratch.data()), FFTW_BACKWARD, flags);
  }
  if (!plans->fwd || !plans->bwd) throw Error("fft: FFTW planning failed");
  plans_ = std::move(plans);
}

void Fft2d::forward(std::complex<double>* data) const { fftw_execute_dft(plans_->fwd, as_fftw(data), as_fftw(data)); }

void Fft2d::backward(std::complex<double>* data) const {
  fftw_execute_dft(plans_->bwd, as_fftw(data), as_fftw(data));
}

}  // namespace holo3d
