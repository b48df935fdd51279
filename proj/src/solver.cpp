#include "holo3d/solver.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "holo3d/metrics.hpp"

namespace holo3d {
namespace {

// mt19937_64 output is fixed by the standard; the distribution classes are not, so map bits by hand.
double uniform_pm1(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

template <typename Derived>
void fill_random(Eigen::DenseBase<Derived>& a, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      const double re = uniform_pm1(rng);
      const double im = uniform_pm1(rng);
      a(i, j) = std::complex<double>(re, im);
    }
  }
}

double power_iteration(const PropagatorPlan& plan, int max_iterations, double tolerance, std::uint64_t seed,
                       int restarts_left) {
  Volume x = random_volume(plan.setup(), seed);
  double norm = frobenius_norm(x);
  if (norm == 0.0) {
    if (restarts_left == 0) throw Error("power iteration: could not find a nonzero start vector");
    return power_iteration(plan, max_iterations, tolerance, seed + 1, restarts_left - 1);
  }
  x.data() /= norm;

  double estimate = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    Volume y = adjoint(forward(x, plan), plan);
    const double rayleigh = inner_product(x, y).real();
    norm = frobenius_norm(y);
    if (norm == 0.0) {
      // Start vector fell in the null space of A.
      if (restarts_left == 0) throw Error("power iteration: start vector in the null space");
      return power_iteration(plan, max_iterations, tolerance, seed + 1, restarts_left - 1);
    }
    const bool converged = it > 0 && std::abs(rayleigh - estimate) <= tolerance * std::abs(rayleigh);
    estimate = rayleigh;
    if (converged) break;
    x.data() = y.data() / norm;
  }
  return estimate;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ParameterError("alpha must be positive");
  if (max_iterations < 1) throw ParameterError("max_iterations must be >= 1");
  if (power_iterations < 1) throw ParameterError("power_iterations must be >= 1");
  if (!(power_tolerance >= 0.0)) throw ParameterError("power_tolerance must be >= 0");
  if (kappa_override && !(*kappa_override > 0.0)) throw ParameterError("kappa override must be positive");
  if (record_every < 1) throw ParameterError("record_every must be >= 1");
  if (!(early_stop_tolerance >= 0.0)) throw ParameterError("early_stop_tolerance must be >= 0");
  regularizer.validate();
}

Volume random_volume(const OpticalSetup& setup, std::uint64_t seed) {
  Volume v = zero_volume(setup);
  fill_random(v.data(), seed);
  return v;
}

ComplexField random_field(const OpticalSetup& setup, std::uint64_t seed) {
  ComplexField f = zero_field(setup);
  fill_random(f.values(), seed);
  return f;
}

double spectral_norm(const PropagatorPlan& plan, int max_iterations, double tolerance, std::uint64_t seed) {
  if (max_iterations < 1) throw ParameterError("power iteration needs at least one iteration");
  return power_iteration(plan, max_iterations, tolerance, seed, 8);
}

double spectral_norm(const PropagatorPlan& plan, const SolverConfig& cfg) {
  return spectral_norm(plan, cfg.power_iterations, cfg.power_tolerance, cfg.seed);
}

Volume grad_data_term(const Volume& object, const ComplexField& data, const PropagatorPlan& plan) {
  ComplexField residual = forward(object, plan);
  if (!(residual.grid() == data.grid())) throw DimensionError("gradient: data grid mismatch");
  residual.values() -= data.values();
  return adjoint(residual, plan);
}

CostTerms cost(const Volume& object, const ComplexField& data, const PropagatorPlan& plan, const SolverConfig& cfg) {
  const ComplexField predicted = forward(object, plan);
  if (!(predicted.grid() == data.grid())) throw DimensionError("cost: data grid mismatch");
  CostTerms terms;
  terms.data = 0.5 * (data.values() - predicted.values()).abs2().sum();
  terms.penalty = penalty(object, cfg.regularizer);
  terms.total = terms.data + cfg.alpha * terms.penalty;
  return terms;
}

Reconstruction fista(const ComplexField& data, const PropagatorPlan& plan, const SolverConfig& cfg,
                     const std::optional<Volume>& initial, const Volume* truth) {
  cfg.validate();
  if (!(data.grid() == plan.grid())) throw DimensionError("fista: data grid does not match propagator grid");
  const auto start = std::chrono::steady_clock::now();

  Reconstruction result;
  RunReport& report = result.report;
  report.kappa = cfg.kappa_override ? *cfg.kappa_override : spectral_norm(plan, cfg);
  report.tau = 1.0 / report.kappa;
  report.mu = cfg.alpha * report.tau;

  Volume current = initial ? *initial : plan.make_volume();
  if (!current.same_shape(plan.make_volume())) throw DimensionError("fista: initial volume shape mismatch");
  if (truth && !truth->same_shape(current)) throw DimensionError("fista: ground truth shape mismatch");
  const bool have_data_norm = frobenius_norm(data) > 0.0;

  auto record = [&](int iteration, const Volume& u) {
    const ComplexField predicted = forward(u, plan);
    CostRecord rec{iteration, {}};
    rec.cost.data = 0.5 * (data.values() - predicted.values()).abs2().sum();
    rec.cost.penalty = penalty(u, cfg.regularizer);
    rec.cost.total = rec.cost.data + cfg.alpha * rec.cost.penalty;
    report.cost_history.push_back(rec);
    if (have_data_norm) report.data_error_history.push_back({iteration, data_domain_error(data, predicted)});
    if (truth) report.object_error_history.push_back({iteration, object_domain_error(*truth, u)});
  };

  record(0, current);
  Volume momentum = current;
  TvDualState tv_duals;
  double t = 1.0;
  int n = 1;
  for (; n <= cfg.max_iterations; ++n) {
    Volume step = grad_data_term(momentum, data, plan);
    step.data() = momentum.data() - report.tau * step.data();
    Volume next = prox(step, report.mu, cfg.regularizer, &tv_duals);
    if (!next.data().allFinite()) throw DivergenceError(n, "non-finite values in FISTA iterate");

    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double beta = (t - 1.0) / t_next;
    momentum.data() = next.data() + beta * (next.data() - current.data());

    bool stop = false;
    if (cfg.early_stop_tolerance > 0.0) {
      const double denom = frobenius_norm(next);
      const double change = std::sqrt((next.data() - current.data()).abs2().sum());
      stop = denom > 0.0 ? change < cfg.early_stop_tolerance * denom : change == 0.0;
    }
    current = std::move(next);
    t = t_next;
    if (stop || n == cfg.max_iterations || n % cfg.record_every == 0) record(n, current);
    if (stop) {
      report.early_stopped = true;
      break;
    }
  }
  report.iterations_run = std::min(n, cfg.max_iterations);
  report.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.estimate = std::move(current);
  return result;
}

}  // namespace holo3d
