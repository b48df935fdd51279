// FISTA reconstruction of a volume from one detector-plane field:
//
//   minimize ½‖V - A U‖²_F + alpha · C₂(U)
//
// with step τ = 1/κ, κ the spectral norm of A†A, and prox weight μ = alpha·τ.

#ifndef HOLO3D_SOLVER_HPP
#define HOLO3D_SOLVER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "holo3d/core.hpp"
#include "holo3d/propagation.hpp"
#include "holo3d/regularizers.hpp"

namespace holo3d {

struct SolverConfig {
  double alpha = 1e-3;
  int max_iterations = 100;
  Regularizer regularizer;
  int power_iterations = 100;
  double power_tolerance = 1e-8;
  std::uint64_t seed = 0;
  /// When set, used as κ directly and power iteration is skipped.
  std::optional<double> kappa_override;
  int record_every = 10;
  /// Stop once ‖U⁽ⁿ⁺¹⁾ - U⁽ⁿ⁾‖ / ‖U⁽ⁿ⁺¹⁾‖ drops below this; 0 disables.
  double early_stop_tolerance = 0.0;

  void validate() const;

  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

struct CostTerms {
  double data = 0.0;     ///< C₁ = ½‖V - A U‖²
  double penalty = 0.0;  ///< C₂
  double total = 0.0;    ///< C₁ + alpha·C₂
};

struct CostRecord {
  int iteration = 0;
  CostTerms cost;
};

struct ErrorRecord {
  int iteration = 0;
  double value = 0.0;
};

/// Per-iteration history of a run. Iteration 0 is the initial guess; entries
/// are recorded every `record_every` iterations and at the final iteration.
struct RunReport {
  std::vector<CostRecord> cost_history;
  std::vector<ErrorRecord> data_error_history;
  std::vector<ErrorRecord> object_error_history;  ///< empty unless a ground truth was supplied
  double kappa = 0.0;
  double tau = 0.0;
  double mu = 0.0;
  int iterations_run = 0;
  bool early_stopped = false;
  double wall_time_seconds = 0.0;
};

struct Reconstruction {
  Volume estimate;
  RunReport report;
};

/// Largest eigenvalue of A†A by power iteration from a seeded random volume.
double spectral_norm(const PropagatorPlan& plan, int max_iterations, double tolerance, std::uint64_t seed);
double spectral_norm(const PropagatorPlan& plan, const SolverConfig& cfg);

/// Seeded complex volume with real and imaginary parts uniform in [-1, 1).
Volume random_volume(const OpticalSetup& setup, std::uint64_t seed);
ComplexField random_field(const OpticalSetup& setup, std::uint64_t seed);

/// ∇C₁ = A†(A U - V).
Volume grad_data_term(const Volume& object, const ComplexField& data, const PropagatorPlan& plan);

CostTerms cost(const Volume& object, const ComplexField& data, const PropagatorPlan& plan, const SolverConfig& cfg);

/// Runs the FISTA recursion for cfg.max_iterations iterations (or until early stop).
/// `initial` defaults to the zero volume. Throws DivergenceError on non-finite iterates.
Reconstruction fista(const ComplexField& data, const PropagatorPlan& plan, const SolverConfig& cfg,
                     const std::optional<Volume>& initial = std::nullopt, const Volume* truth = nullptr);

}  // namespace holo3d

#endif  // HOLO3D_SOLVER_HPP
