// Test-only reference implementations. Everything here is written the slow,
// direct way and shares no code path with the library beyond the core types.

#ifndef HOLO3D_TESTS_ORACLES_HPP
#define HOLO3D_TESTS_ORACLES_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "holo3d/core.hpp"
#include "holo3d/propagation.hpp"

namespace holo3d::oracle {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

inline cd brute_inner(const Volume& a, const Volume& b) {
  cd sum = 0.0;
  for (Index c = 0; c < a.num_planes(); ++c)
    for (Index y = 0; y < a.grid().ny; ++y)
      for (Index x = 0; x < a.grid().nx; ++x) sum += std::conj(a(x, y, c)) * b(x, y, c);
  return sum;
}

inline double brute_l1(const Volume& a) {
  double sum = 0.0;
  for (Index c = 0; c < a.num_planes(); ++c)
    for (Index y = 0; y < a.grid().ny; ++y)
      for (Index x = 0; x < a.grid().nx; ++x) sum += std::abs(a(x, y, c));
  return sum;
}

/// Naive O(N²) 2D DFT, sign -1 for forward, +1 for inverse, unnormalized.
inline Eigen::ArrayXXcd naive_dft(const Eigen::ArrayXXcd& in, int sign) {
  const Index nx = in.rows();
  const Index ny = in.cols();
  Eigen::ArrayXXcd out = Eigen::ArrayXXcd::Zero(nx, ny);
  for (Index ky = 0; ky < ny; ++ky)
    for (Index kx = 0; kx < nx; ++kx) {
      cd acc = 0.0;
      for (Index y = 0; y < ny; ++y)
        for (Index x = 0; x < nx; ++x) {
          const double ph = sign * 2.0 * kPi *
                            (static_cast<double>(kx * x) / static_cast<double>(nx) +
                             static_cast<double>(ky * y) / static_cast<double>(ny));
          acc += in(x, y) * std::polar(1.0, ph);
        }
      out(kx, ky) = acc;
    }
  return out;
}

inline double signed_freq(Index i, Index n, double pitch) {
  const Index m = 2 * i < n ? i : i - n;
  return static_cast<double>(m) / (static_cast<double>(n) * pitch);
}

/// Single-slice propagation through a naive DFT and the Fresnel transfer written out directly.
inline Eigen::ArrayXXcd naive_propagate(const Eigen::ArrayXXcd& in, double pitch, double wavelength, double z) {
  const Index nx = in.rows();
  const Index ny = in.cols();
  const double k = 2.0 * kPi / wavelength;
  Eigen::ArrayXXcd spec = naive_dft(in, -1);
  for (Index y = 0; y < ny; ++y)
    for (Index x = 0; x < nx; ++x) {
      const double fx = signed_freq(x, nx, pitch);
      const double fy = signed_freq(y, ny, pitch);
      spec(x, y) *= std::exp(cd(0.0, k * z)) * std::exp(cd(0.0, -kPi * wavelength * z * (fx * fx + fy * fy)));
    }
  return naive_dft(spec, +1) / static_cast<double>(nx * ny);
}

/// Slice-by-slice hologram formation: propagate each plane on its own and sum.
inline Eigen::ArrayXXcd per_slice_forward(const Volume& u, const OpticalSetup& s) {
  Eigen::ArrayXXcd v = Eigen::ArrayXXcd::Zero(s.grid.nx, s.grid.ny);
  const double k = 2.0 * kPi / s.wavelength;
  for (Index c = 0; c < u.num_planes(); ++c) {
    const double zc = s.zplanes[static_cast<std::size_t>(c)];
    const cd phase = std::exp(cd(0.0, k * (zc - s.zplanes.back())));
    v += phase * naive_propagate(u.plane(c), s.grid.pitch, s.wavelength, s.z_detector - zc);
  }
  return v;
}

/// Slice-by-slice replay: conjugate phase times back-propagation to each plane.
inline Volume per_slice_adjoint(const Eigen::ArrayXXcd& v, const OpticalSetup& s) {
  Volume out(s.grid, s.zplanes);
  const double k = 2.0 * kPi / s.wavelength;
  for (Index c = 0; c < out.num_planes(); ++c) {
    const double zc = s.zplanes[static_cast<std::size_t>(c)];
    const cd phase = std::exp(cd(0.0, -k * (zc - s.zplanes.back())));
    out.plane(c) = phase * naive_propagate(v, s.grid.pitch, s.wavelength, -(s.z_detector - zc));
  }
  return out;
}

/// Circular convolution with the sampled Fresnel impulse response
/// h(x,y;z) = exp(ikz)/(iλz)·exp(iπ(x²+y²)/(λz)), times the sample area.
inline Eigen::ArrayXXcd direct_fresnel_convolution(const Eigen::ArrayXXcd& in, double pitch, double wavelength,
                                                   double z) {
  const Index nx = in.rows();
  const Index ny = in.cols();
  const double k = 2.0 * kPi / wavelength;
  auto h = [&](Index dx, Index dy) {
    const double x = static_cast<double>(dx) * pitch;
    const double y = static_cast<double>(dy) * pitch;
    return std::exp(cd(0.0, k * z)) / cd(0.0, wavelength * z) *
           std::exp(cd(0.0, kPi * (x * x + y * y) / (wavelength * z))) * pitch * pitch;
  };
  auto wrap = [](Index d, Index n) {
    d %= n;
    if (d < 0) d += n;
    return 2 * d < n ? d : d - n;
  };
  Eigen::ArrayXXcd out = Eigen::ArrayXXcd::Zero(nx, ny);
  for (Index y = 0; y < ny; ++y)
    for (Index x = 0; x < nx; ++x)
      for (Index yp = 0; yp < ny; ++yp)
        for (Index xp = 0; xp < nx; ++xp) out(x, y) += in(xp, yp) * h(wrap(x - xp, nx), wrap(y - yp, ny));
  return out;
}

/// Dense matrix of the forward operator, one column per voxel (x fastest, then y, then plane).
inline Eigen::MatrixXcd dense_forward_matrix(const PropagatorPlan& plan) {
  const Grid2D& g = plan.grid();
  const Index voxels = g.size() * plan.num_planes();
  Eigen::MatrixXcd a(g.size(), voxels);
  Volume e = plan.make_volume();
  for (Index j = 0; j < voxels; ++j) {
    e.data().setZero();
    e.data()(j % g.size(), j / g.size()) = 1.0;
    const ComplexField col = forward(e, plan);
    a.col(j) = Eigen::Map<const Eigen::VectorXcd>(col.values().data(), g.size());
  }
  return a;
}

inline double tv_real_brute(const Eigen::ArrayXXd& p) {
  double sum = 0.0;
  for (Index b = 0; b < p.cols(); ++b)
    for (Index a = 0; a < p.rows(); ++a) {
      const double dx = a > 0 ? p(a, b) - p(a - 1, b) : 0.0;
      const double dy = b > 0 ? p(a, b) - p(a, b - 1) : 0.0;
      sum += std::sqrt(dx * dx + dy * dy);
    }
  return sum;
}

/// TV prox of a real image by Chambolle–Pock primal-dual iterations run to tight convergence.
inline Eigen::ArrayXXd tv_prox_primal_dual(const Eigen::ArrayXXd& b, double mu, int iterations = 200000) {
  const Index nx = b.rows();
  const Index ny = b.cols();
  auto grad = [&](const Eigen::ArrayXXd& x, Eigen::ArrayXXd& gx, Eigen::ArrayXXd& gy) {
    gx.setZero(nx, ny);
    gy.setZero(nx, ny);
    for (Index j = 0; j < ny; ++j)
      for (Index i = 0; i < nx; ++i) {
        if (i > 0) gx(i, j) = x(i, j) - x(i - 1, j);
        if (j > 0) gy(i, j) = x(i, j) - x(i, j - 1);
      }
  };
  auto grad_adjoint = [&](const Eigen::ArrayXXd& px, const Eigen::ArrayXXd& py) {
    Eigen::ArrayXXd out = Eigen::ArrayXXd::Zero(nx, ny);
    for (Index j = 0; j < ny; ++j)
      for (Index i = 0; i < nx; ++i) {
        if (i > 0) {
          out(i, j) += px(i, j);
          out(i - 1, j) -= px(i, j);
        }
        if (j > 0) {
          out(i, j) += py(i, j);
          out(i, j - 1) -= py(i, j);
        }
      }
    return out;
  };
  const double sigma = 1.0 / std::sqrt(8.0);
  const double tau = 1.0 / std::sqrt(8.0);
  Eigen::ArrayXXd x = b, xbar = b, px = Eigen::ArrayXXd::Zero(nx, ny), py = px, gx, gy;
  for (int it = 0; it < iterations; ++it) {
    grad(xbar, gx, gy);
    px += sigma * gx;
    py += sigma * gy;
    // Project onto the disc of radius mu.
    for (Index j = 0; j < ny; ++j)
      for (Index i = 0; i < nx; ++i) {
        const double n = std::hypot(px(i, j), py(i, j));
        if (n > mu) {
          px(i, j) *= mu / n;
          py(i, j) *= mu / n;
        }
      }
    const Eigen::ArrayXXd x_old = x;
    x = (x - tau * grad_adjoint(px, py) + tau * b) / (1.0 + tau);
    xbar = 2.0 * x - x_old;
  }
  return x;
}

/// Complex-modulus TV prox by Chambolle–Pock, dual fields projected jointly over real and imaginary parts.
inline Eigen::ArrayXXcd tv_prox_primal_dual(const Eigen::ArrayXXcd& b, double mu, int iterations = 200000) {
  const Index nx = b.rows();
  const Index ny = b.cols();
  auto grad = [&](const Eigen::ArrayXXcd& x, Eigen::ArrayXXcd& gx, Eigen::ArrayXXcd& gy) {
    gx.setZero(nx, ny);
    gy.setZero(nx, ny);
    for (Index j = 0; j < ny; ++j)
      for (Index i = 0; i < nx; ++i) {
        if (i > 0) gx(i, j) = x(i, j) - x(i - 1, j);
        if (j > 0) gy(i, j) = x(i, j) - x(i, j - 1);
      }
  };
  auto grad_adjoint = [&](const Eigen::ArrayXXcd& px, const Eigen::ArrayXXcd& py) {
    Eigen::ArrayXXcd out = Eigen::ArrayXXcd::Zero(nx, ny);
    for (Index j = 0; j < ny; ++j)
      for (Index i = 0; i < nx; ++i) {
        if (i > 0) {
          out(i, j) += px(i, j);
          out(i - 1, j) -= px(i, j);
        }
        if (j > 0) {
          out(i, j) += py(i, j);
          out(i, j - 1) -= py(i, j);
        }
      }
    return out;
  };
  const double sigma = 1.0 / std::sqrt(8.0);
  const double tau = 1.0 / std::sqrt(8.0);
  Eigen::ArrayXXcd x = b, xbar = b, px = Eigen::ArrayXXcd::Zero(nx, ny), py = px, gx, gy;
  for (int it = 0; it < iterations; ++it) {
    grad(xbar, gx, gy);
    px += sigma * gx;
    py += sigma * gy;
    for (Index j = 0; j < ny; ++j)
      for (Index i = 0; i < nx; ++i) {
        const double n = std::sqrt(std::norm(px(i, j)) + std::norm(py(i, j)));
        if (n > mu) {
          px(i, j) *= mu / n;
          py(i, j) *= mu / n;
        }
      }
    const Eigen::ArrayXXcd x_old = x;
    x = (x - tau * grad_adjoint(px, py) + tau * b) / (1.0 + tau);
    xbar = 2.0 * x - x_old;
  }
  return x;
}

inline Eigen::ArrayXXcd random_plane(Index nx, Index ny, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::ArrayXXcd p(nx, ny);
  for (Index j = 0; j < ny; ++j)
    for (Index i = 0; i < nx; ++i) p(i, j) = cd(u(rng), u(rng));
  return p;
}

inline Volume random_volume(const Grid2D& g, const std::vector<double>& z, std::mt19937_64& rng) {
  Volume v(g, z);
  for (Index c = 0; c < v.num_planes(); ++c) v.plane(c) = random_plane(g.nx, g.ny, rng);
  return v;
}

}  // namespace holo3d::oracle

#endif  // HOLO3D_TESTS_ORACLES_HPP
