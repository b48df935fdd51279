#include "holo3d/regularizers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace holo3d {
namespace {

void check_mu(double mu) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw ParameterError("prox weight mu must be finite and >= 0");
}

// FGP on C coupled real channels: argmin_L mu·Σ_px ‖(D_x L_k, D_y L_k)_k‖ + ½‖L - b‖².
// C = 1 is ordinary TV of a real image; C = 2 with (Re, Im) is TV on complex moduli.
// Scratch buffers are reused across calls.
template <int C>
class FgpSolver {
 public:
  using Channels = std::array<Eigen::ArrayXXd, C>;

  FgpSolver(Index nx, Index ny) {
    for (int k = 0; k < C; ++k) {
      g1_[k].resize(nx, ny);
      g2_[k].resize(nx, ny);
      r1_[k].resize(nx, ny);
      r2_[k].resize(nx, ny);
      x_[k].resize(nx, ny);
    }
  }

  // With p1/p2 given, the dual starts from them and the final dual is written back.
  void solve(const Channels& b, double mu, int iterations, Channels& out, Eigen::ArrayXXd* p1 = nullptr,
             Eigen::ArrayXXd* p2 = nullptr) {
    if (mu == 0.0) {
      out = b;
      return;
    }
    const Index nx = b[0].rows();
    const Index ny = b[0].cols();
    const double step = 1.0 / (8.0 * mu);
    for (int k = 0; k < C; ++k) {
      if (p1 && p2) {
        g1_[k] = p1[k];
        g2_[k] = p2[k];
      } else {
        g1_[k].setZero();
        g2_[k].setZero();
      }
      r1_[k] = g1_[k];
      r2_[k] = g2_[k];
    }
    double t = 1.0;
    for (int it = 0; it < iterations; ++it) {
      for (int k = 0; k < C; ++k) primal(b[k], mu, r1_[k], r2_[k], x_[k]);
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      const double beta = (t - 1.0) / t_next;
      // Gradient ascent on the dual, pixelwise projection onto the unit ball, then momentum.
      for (Index j = 0; j < ny; ++j) {
        const Index jl = j > 0 ? j - 1 : 0;
        const double* xc[C];
        const double* xl[C];
        double* r1[C];
        double* r2[C];
        double* g1[C];
        double* g2[C];
        for (int k = 0; k < C; ++k) {
          xc[k] = x_[k].col(j).data();
          xl[k] = x_[k].col(jl).data();
          r1[k] = r1_[k].col(j).data();
          r2[k] = r2_[k].col(j).data();
          g1[k] = g1_[k].col(j).data();
          g2[k] = g2_[k].col(j).data();
        }
        auto pixel = [&](Index i, Index il) {
          double q1[C];
          double q2[C];
          double norm2 = 0.0;
          for (int k = 0; k < C; ++k) {
            q1[k] = r1[k][i] + step * (xc[k][i] - xc[k][il]);
            q2[k] = r2[k][i] + step * (xc[k][i] - xl[k][i]);
            norm2 += q1[k] * q1[k] + q2[k] * q2[k];
          }
          const double scale = 1.0 / std::max(1.0, std::sqrt(norm2));
#pragma GCC unroll 2
          for (int k = 0; k < C; ++k) {
            const double a = q1[k] * scale;
            const double c = q2[k] * scale;
            r1[k][i] = a + beta * (a - g1[k][i]);
            r2[k][i] = c + beta * (c - g2[k][i]);
            g1[k][i] = a;
            g2[k][i] = c;
          }
        };
        pixel(0, 0);
        for (Index i = 1; i < nx; ++i) pixel(i, i - 1);
      }
      t = t_next;
    }
    for (int k = 0; k < C; ++k) {
      primal(b[k], mu, g1_[k], g2_[k], out[k]);
      if (p1 && p2) {
        p1[k] = g1_[k];
        p2[k] = g2_[k];
      }
    }
  }

 private:
  // b - mu·Dᵀp with Dᵀp(a,b) = p1(a,b) - p1(a+1,b) + p2(a,b) - p2(a,b+1), out-of-range terms zero.
  static void primal(const Eigen::ArrayXXd& b, double mu, const Eigen::ArrayXXd& p1, const Eigen::ArrayXXd& p2,
                     Eigen::ArrayXXd& out) {
    const Index nx = b.rows();
    const Index ny = b.cols();
    for (Index j = 0; j < ny; ++j) {
      const double* a1 = &p1(0, j);
      const double* a2 = &p2(0, j);
      const double* bj = &b(0, j);
      double* o = &out(0, j);
      for (Index i = 0; i + 1 < nx; ++i) o[i] = a1[i] - a1[i + 1] + a2[i];
      o[nx - 1] = a1[nx - 1] + a2[nx - 1];
      if (j + 1 < ny) {
        const double* next = &p2(0, j + 1);
        for (Index i = 0; i < nx; ++i) o[i] -= next[i];
      }
      for (Index i = 0; i < nx; ++i) o[i] = bj[i] - mu * o[i];
    }
  }

  Channels g1_, g2_, r1_, r2_, x_;
};

}  // namespace

double l1_norm(const Volume& volume) { return volume.data().abs().sum(); }

double tv_slice(const Eigen::Ref<const Eigen::ArrayXXcd>& plane) {
  const Index nx = plane.rows();
  const Index ny = plane.cols();
  double total = 0.0;
  for (Index b = 0; b < ny; ++b) {
    for (Index a = 0; a < nx; ++a) {
      const double dx = a > 0 ? std::norm(plane(a, b) - plane(a - 1, b)) : 0.0;
      const double dy = b > 0 ? std::norm(plane(a, b) - plane(a, b - 1)) : 0.0;
      total += std::sqrt(dx + dy);
    }
  }
  return total;
}

double tv_norm(const Volume& volume) {
  double total = 0.0;
  for (Index c = 0; c < volume.num_planes(); ++c) total += tv_slice(volume.plane(c));
  return total;
}

double penalty(const Volume& volume, const Regularizer& reg) {
  switch (reg.kind) {
    case RegularizerKind::l1_positive: {
      const auto& d = volume.data();
      if ((d.imag() != 0.0).any() || (d.real() < 0.0).any()) return std::numeric_limits<double>::infinity();
      return l1_norm(volume);
    }
    case RegularizerKind::tv_slicewise:
      return tv_norm(volume);
  }
  throw ParameterError("unknown regularizer kind");
}

Volume prox_l1_positive(const Volume& volume, double mu) {
  check_mu(mu);
  Volume out(volume.grid(), volume.zplanes());
  const Eigen::ArrayXXd re = volume.data().real();
  out.data().real() = (re >= mu).select(re - mu, 0.0);
  return out;
}

Eigen::ArrayXXd fgp_tv_denoise(const Eigen::Ref<const Eigen::ArrayXXd>& image, double mu, int iterations) {
  check_mu(mu);
  if (iterations < 1) throw ParameterError("FGP needs at least one iteration");
  FgpSolver<1>::Channels in{image};
  FgpSolver<1>::Channels out{Eigen::ArrayXXd(image.rows(), image.cols())};
  FgpSolver<1>(image.rows(), image.cols()).solve(in, mu, iterations, out);
  return out[0];
}

Eigen::ArrayXXcd fgp_tv_denoise(const Eigen::Ref<const Eigen::ArrayXXcd>& image, double mu, int iterations) {
  check_mu(mu);
  if (iterations < 1) throw ParameterError("FGP needs at least one iteration");
  FgpSolver<2>::Channels in{image.real(), image.imag()};
  FgpSolver<2>::Channels out = in;
  FgpSolver<2>(image.rows(), image.cols()).solve(in, mu, iterations, out);
  Eigen::ArrayXXcd result(image.rows(), image.cols());
  result.real() = out[0];
  result.imag() = out[1];
  return result;
}

Volume prox_tv(const Volume& volume, double mu, const Regularizer& reg, TvDualState* warm) {
  check_mu(mu);
  reg.validate();
  if (reg.kind != RegularizerKind::tv_slicewise) throw ParameterError("prox_tv called with a non-TV regularizer");
  const Grid2D& g = volume.grid();
  const auto channels = static_cast<std::size_t>(2 * volume.num_planes());
  if (warm && (warm->p1.size() != channels || warm->p2.size() != channels || warm->p1[0].rows() != g.nx ||
               warm->p1[0].cols() != g.ny)) {
    warm->p1.assign(channels, Eigen::ArrayXXd::Zero(g.nx, g.ny));
    warm->p2.assign(channels, Eigen::ArrayXXd::Zero(g.nx, g.ny));
  }
  Volume out(g, volume.zplanes());
  const int inner = reg.tv_inner_iterations;

  if (reg.tv_coupling == TvCoupling::joint) {
    FgpSolver<2> solver(g.nx, g.ny);
    FgpSolver<2>::Channels in{Eigen::ArrayXXd(g.nx, g.ny), Eigen::ArrayXXd(g.nx, g.ny)};
    FgpSolver<2>::Channels res = in;
    for (Index c = 0; c < volume.num_planes(); ++c) {
      const auto k = static_cast<std::size_t>(2 * c);
      in[0] = volume.plane(c).real();
      in[1] = volume.plane(c).imag();
      if (warm) {
        // The two channels of a plane are stored next to each other.
        solver.solve(in, mu, inner, res, &warm->p1[k], &warm->p2[k]);
      } else {
        solver.solve(in, mu, inner, res);
      }
      out.plane(c).real() = res[0];
      out.plane(c).imag() = res[1];
    }
    return out;
  }

  FgpSolver<1> solver(g.nx, g.ny);
  FgpSolver<1>::Channels in{Eigen::ArrayXXd(g.nx, g.ny)};
  FgpSolver<1>::Channels res = in;
  for (Index c = 0; c < volume.num_planes(); ++c) {
    const auto k = static_cast<std::size_t>(2 * c);
    for (int part = 0; part < 2; ++part) {
      in[0] = part == 0 ? Eigen::ArrayXXd(volume.plane(c).real()) : Eigen::ArrayXXd(volume.plane(c).imag());
      if (warm) {
        solver.solve(in, mu, inner, res, &warm->p1[k + part], &warm->p2[k + part]);
      } else {
        solver.solve(in, mu, inner, res);
      }
      if (part == 0) {
        out.plane(c).real() = res[0];
      } else {
        out.plane(c).imag() = res[0];
      }
    }
  }
  return out;
}

Volume prox(const Volume& volume, double mu, const Regularizer& reg, TvDualState* warm) {
  switch (reg.kind) {
    case RegularizerKind::l1_positive:
      return prox_l1_positive(volume, mu);
    case RegularizerKind::tv_slicewise:
      return prox_tv(volume, mu, reg, warm);
  }
  throw ParameterError("unknown regularizer kind");
}

}  // namespace holo3d
