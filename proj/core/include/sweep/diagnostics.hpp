#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sweep/problem.hpp"
#include "sweep/stepper.hpp"

namespace sweep {

/// Constants the convergence analysis derives from the assumption constants:
///   eta    = alpha / (M gamma)        prox-regularity radius of Q(t)
///   theta  = 2 gamma beta / alpha     metric qualification constant
///   r_qual = min(4 rho / (13 beta), alpha / (2 M gamma))  qualification radius
struct DerivedConstants {
  double eta = 0.0;
  double theta = 0.0;
  double r_qual = 0.0;
};

DerivedConstants derived_constants(const AssumptionParams& params);

/// Sampled verification results for one scenario. Violation counts of zero
/// mean the supplied constants survived the sampling; nonzero counts mean
/// they are wrong for the scenario (never fatal).
struct DiagnosticsReport {
  double eta = 0.0;
  double theta = 0.0;
  double r_qual = 0.0;
  double gamma_estimate = 1.0;
  double gradient_norm_min = 0.0;
  double gradient_norm_max = 0.0;
  int quadratic_bound_violations = 0;
  int qualification_violations = 0;
  int samples_used = 0;
  std::uint64_t seed = 0;
  /// Positive-linear dependence among active gradients was certified
  /// somewhere (the constraint qualification fails on this scenario).
  bool degenerate_gradients = false;
};

/// Flat key-value form consumed by the check subcommand.
nlohmann::json to_json(const DiagnosticsReport& report);

/// Sampled lower bound for the inverse-triangle constant gamma over the
/// near-active set I_rho(t, q): the maximum of
///   sum_i lambda_i |grad g_i| / |sum_i lambda_i grad g_i|
/// over nonnegative weight vectors. Weights are the coordinate directions,
/// `trials` seeded random draws, and (for up to three active constraints) a
/// fine simplex grid that makes the bound essentially exact. Returns 1 when
/// at most one constraint is near-active.
///
/// Throws DegenerateGradientsError when a nonnegative combination of
/// gradients vanishes while its weighted norms do not: the active gradients
/// are positive-linearly dependent and the constraint qualification fails.
double estimate_gamma(const SweepingProblem& problem, double t,
                      const Configuration& q, double rho, int trials,
                      std::uint64_t seed);

/// Checks, per constraint, the curvature bound on the linearization error
///   d_i(q; linearized at q_tilde) <= M / (2 alpha) |q - q_tilde|^2 + feas_tol
/// for a feasible q. Entry i is true when the bound holds.
std::vector<bool> check_quadratic_distance(const SweepingProblem& problem,
                                           const AssumptionParams& params,
                                           double t, const Configuration& q_tilde,
                                           const Configuration& q);

struct QualificationCheck {
  int violations = 0;
  int samples_checked = 0;  // 0 when the radius hypothesis failed
};

/// Samples the metric qualification inequality
///   d_{Qc}(q) <= theta * sum_i d_{Qc_i}(q)
/// over `sample_count` points in the ball of radius r_qual / 4 around
/// q_tilde. Requires d_{Qc}(q_tilde) <= r_qual / 4 (always true for feasible
/// q_tilde); otherwise no samples are checked.
QualificationCheck check_metric_qualification(const SweepingProblem& problem,
                                              const AssumptionParams& params,
                                              double t,
                                              const Configuration& q_tilde,
                                              int sample_count,
                                              std::uint64_t seed);

/// Empirical set-motion rate: max_k d_{Qc(t_{k+1}, q_k)}(q_k) / h and the
/// per-step ratios, from the stats recorded during the solve.
std::pair<double, std::vector<double>> estimate_step_distance(
    const DiscreteTrajectory& traj);

}  // namespace sweep
