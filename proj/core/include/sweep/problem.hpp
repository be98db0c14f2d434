#pragma once

#include <functional>
#include <set>
#include <vector>

#include <Eigen/Core>

#include "sweep/errors.hpp"
#include "sweep/tolerances.hpp"

namespace sweep {

/// State of the inclusion: a point in R^d.
using Configuration = Eigen::VectorXd;

/// Evaluator bundle for one inequality constraint g_i. The feasible side is
/// g_i(t, q) >= 0 and g_i(t, .) must be convex. Evaluators must be pure
/// functions of (t, q): the solver shares them freely across threads.
struct Constraint {
  std::function<double(double, const Configuration&)> value;
  std::function<Eigen::VectorXd(double, const Configuration&)> gradient;
  /// Optional; only diagnostics consume it.
  std::function<double(double, const Configuration&)> time_derivative;
  /// Set false for constraints with no time dependence; the stepper then
  /// skips the set-motion distance solve (the set does not move).
  bool time_varying = true;
};

/// dq/dt + N(Q(t), q) of f(t, q), q(0) = q0, on [0, horizon], with
/// Q(t) = {q : g_i(t, q) >= 0 for all i}.
///
/// Every constraint must be evaluable and differentiable on all of R^d (not
/// just near its feasible set); this is the standing hypothesis replacing any
/// explicit neighborhood bookkeeping. The perturbation is a pure function of
/// (t, q); if it is nonautonomous the caller is responsible for its time
/// regularity (an autonomous f is always fine).
struct SweepingProblem {
  int dimension = 0;
  std::vector<Constraint> constraints;
  std::function<Eigen::VectorXd(double, const Configuration&)> perturbation;
  Configuration initial;
  double horizon = 0.0;
  /// Optional per-step preselection of constraint indices for the step
  /// polyhedron (performance only, must be a pure function). The stepper
  /// verifies the stepped point against every constraint and re-solves with
  /// the full set if any is violated.
  std::function<std::vector<int>(double, const Configuration&, double)>
      candidate_filter;
};

/// Throws if the problem is malformed (bad dimension, non-finite or
/// infeasible initial point, nonpositive horizon).
void validate_problem(const SweepingProblem& problem, double feas_tol = tol::feas);

/// The scenario constants the analysis assumes:
///   alpha <= |grad g_i| <= beta,  |dt g_i| <= beta,
///   |D^2 g_i| <= M,  |dt grad g_i| <= M,
/// gamma >= 1 the inverse-triangle constant over near-active gradients,
/// rho the near-active threshold, c_margin the evaluation-neighborhood
/// margin, k_lip a Lipschitz constant for the set motion. They are supplied
/// per scenario (the theory only asserts they exist); diagnostics cross-check
/// them by sampling.
struct AssumptionParams {
  double alpha = 1.0;
  double beta = 1.0;
  double m_bound = 1.0;
  double rho = 1.0;
  double gamma = 1.0;
  double c_margin = 1.0;
  double k_lip = 1.0;
};

void validate_params(const AssumptionParams& params);

/// g_i(t, q) for every constraint. Throws EvaluationError on a non-finite
/// value.
std::vector<double> evaluate_all(const SweepingProblem& problem, double t,
                                 const Configuration& q);

/// {i : g_i(t, q) <= rho}. With rho = 0 this is the active set up to
/// feas_tol. Infeasible q is allowed (diagnostics probe such points); indices
/// with g_i < -feas_tol are then still reported.
std::set<int> active_set(const SweepingProblem& problem, double t,
                         const Configuration& q, double rho,
                         double feas_tol = tol::feas);

/// min_i g_i(t, q) >= -tol.
bool is_feasible(const SweepingProblem& problem, double t,
                 const Configuration& q, double tol = tol::feas);

double min_constraint_value(const SweepingProblem& problem, double t,
                            const Configuration& q);

/// Max over coordinate directions of |central difference - analytic gradient
/// entry|. Validates user-supplied gradients.
double gradient_check(const Constraint& constraint, double t,
                      const Configuration& q, double step);

}  // namespace sweep
