#include "sweep/problem.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace sweep {

void validate_problem(const SweepingProblem& problem, double feas_tol) {
  if (problem.dimension < 1) {
    throw DimensionMismatchError("problem dimension must be >= 1");
  }
  if (problem.initial.size() != problem.dimension) {
    throw DimensionMismatchError("initial configuration has dimension " +
                                 std::to_string(problem.initial.size()) +
                                 ", expected " + std::to_string(problem.dimension));
  }
  if (!problem.initial.allFinite()) {
    throw EvaluationError(-1, "initial configuration has non-finite entries");
  }
  if (!(problem.horizon > 0.0)) {
    throw OutOfRangeError("horizon must be positive");
  }
  if (!problem.perturbation) {
    throw EvaluationError(-1, "perturbation field is not set");
  }
  const double margin = min_constraint_value(problem, 0.0, problem.initial);
  if (margin < -feas_tol) {
    throw EvaluationError(-1, "initial configuration infeasible: min g = " +
                                  std::to_string(margin));
  }
}

void validate_params(const AssumptionParams& p) {
  const bool positive = p.alpha > 0.0 && p.beta > 0.0 && p.m_bound > 0.0 &&
                        p.rho > 0.0 && p.c_margin > 0.0 && p.k_lip > 0.0;
  if (!positive) {
    throw OutOfRangeError("assumption constants must be strictly positive");
  }
  if (p.alpha > p.beta) {
    throw OutOfRangeError("alpha must not exceed beta");
  }
  if (p.gamma < 1.0) {
    throw OutOfRangeError("gamma must be >= 1");
  }
}

std::vector<double> evaluate_all(const SweepingProblem& problem, double t,
                                 const Configuration& q) {
  std::vector<double> values;
  values.reserve(problem.constraints.size());
  for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
    const double v = problem.constraints[i].value(t, q);
    if (!std::isfinite(v)) {
      throw EvaluationError(static_cast<int>(i),
                            "constraint " + std::to_string(i) +
                                " evaluated to a non-finite value");
    }
    values.push_back(v);
  }
  return values;
}

std::set<int> active_set(const SweepingProblem& problem, double t,
                         const Configuration& q, double rho, double feas_tol) {
  std::set<int> active;
  const std::vector<double> values = evaluate_all(problem, t, q);
  // rho = 0 means the exact active set, up to the feasibility tolerance;
  // the floor keeps active_set(0) a subset of active_set(rho) for every rho.
  const double threshold = std::max(rho, feas_tol);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] <= threshold) active.insert(static_cast<int>(i));
  }
  return active;
}

bool is_feasible(const SweepingProblem& problem, double t,
                 const Configuration& q, double tol) {
  return min_constraint_value(problem, t, q) >= -tol;
}

double min_constraint_value(const SweepingProblem& problem, double t,
                            const Configuration& q) {
  double min_value = std::numeric_limits<double>::infinity();
  for (const double v : evaluate_all(problem, t, q)) {
    min_value = std::min(min_value, v);
  }
  return min_value;
}

double gradient_check(const Constraint& constraint, double t,
                      const Configuration& q, double step) {
  const Eigen::VectorXd analytic = constraint.gradient(t, q);
  Configuration probe = q;
  double worst = 0.0;
  for (int k = 0; k < q.size(); ++k) {
    probe[k] = q[k] + step;
    const double plus = constraint.value(t, probe);
    probe[k] = q[k] - step;
    const double minus = constraint.value(t, probe);
    probe[k] = q[k];
    const double fd = (plus - minus) / (2.0 * step);
    worst = std::max(worst, std::abs(fd - analytic[k]));
  }
  return worst;
}

}  // namespace sweep
