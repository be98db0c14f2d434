#include "sweep/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sweep/log.hpp"

namespace sweep {

double DiscreteTrajectory::max_velocity() const {
  double worst = 0.0;
  for (const StepStats& s : stats) worst = std::max(worst, s.displacement);
  return h > 0.0 ? worst / h : 0.0;
}

double DiscreteTrajectory::max_set_motion_rate() const {
  double worst = 0.0;
  for (const StepStats& s : stats) worst = std::max(worst, s.set_motion);
  return h > 0.0 ? worst / h : 0.0;
}

namespace {

// Projection onto the filtered polyhedron, falling back to the full
// constraint set whenever the stepped point violates anything the filter
// left out. Multipliers come back indexed over the full constraint list.
struct CorrectionOutcome {
  ProjectionResult proj;
  Polyhedron poly{0};
  int rows_used = 0;
};

CorrectionOutcome correct(const SweepingProblem& problem, double t_next,
                          const Configuration& q_k, double h,
                          const Eigen::VectorXd& prediction,
                          const Eigen::VectorXd* warm_start,
                          const StepOptions& options) {
  const int p = static_cast<int>(problem.constraints.size());
  if (problem.candidate_filter) {
    const std::vector<int> subset = problem.candidate_filter(t_next, q_k, h);
    if (static_cast<int>(subset.size()) < p) {
      Polyhedron poly = linearize_subset(problem, t_next, q_k, subset);
      Eigen::VectorXd warm_sub;
      if (warm_start != nullptr && warm_start->size() == p) {
        warm_sub.resize(static_cast<Eigen::Index>(subset.size()));
        for (std::size_t r = 0; r < subset.size(); ++r) {
          warm_sub[static_cast<Eigen::Index>(r)] = (*warm_start)[subset[r]];
        }
      }
      ProjectionResult proj =
          project(prediction, poly, warm_sub.size() > 0 ? &warm_sub : nullptr,
                  options.projection);
      if (min_constraint_value(problem, t_next, proj.point) >= -options.feas_tol) {
        Eigen::VectorXd full = Eigen::VectorXd::Zero(p);
        for (std::size_t r = 0; r < subset.size(); ++r) {
          full[subset[r]] = proj.multipliers[static_cast<Eigen::Index>(r)];
        }
        proj.multipliers = std::move(full);
        return {std::move(proj), std::move(poly), static_cast<int>(subset.size())};
      }
      SWEEP_DEBUG("filtered step violated an omitted constraint, re-solving full");
    }
  }
  Polyhedron poly = linearize(problem, t_next, q_k);
  ProjectionResult proj = project(prediction, poly, warm_start, options.projection);
  return {std::move(proj), std::move(poly), p};
}

}  // namespace

StepResult step(const SweepingProblem& problem, double t_k, const Configuration& q_k,
                double h, const Eigen::VectorXd* warm_start,
                const StepOptions& options) {
  const double t_next = t_k + h;
  const Eigen::VectorXd drift = problem.perturbation(t_k, q_k);
  if (drift.size() != q_k.size() || !drift.allFinite()) {
    throw EvaluationError(-1, "perturbation returned a bad vector");
  }
  const Eigen::VectorXd prediction = q_k + h * drift;

  CorrectionOutcome corrected =
      correct(problem, t_next, q_k, h, prediction, warm_start, options);

  StepResult out;
  out.next = std::move(corrected.proj.point);
  out.stats.iterations = corrected.proj.iterations;
  out.stats.residual = corrected.proj.residual;
  out.stats.prediction_gap = (out.next - prediction).norm();
  out.stats.displacement = (out.next - q_k).norm();
  out.stats.constraints_used = corrected.rows_used;
  out.multipliers = std::move(corrected.proj.multipliers);

  bool needs_motion_solve = false;
  if (options.record_set_motion) {
    for (const Constraint& c : problem.constraints) {
      if (c.time_varying) {
        needs_motion_solve = true;
        break;
      }
    }
  }
  // A static set never sweeps q_k anywhere: q_k is feasible, hence inside
  // its own linearization.
  out.stats.set_motion =
      needs_motion_solve ? distance(q_k, corrected.poly, options.projection)
                         : 0.0;
  return out;
}

DiscreteTrajectory solve(const SweepingProblem& problem, int n,
                         const StepOptions& options) {
  if (n < 1) throw OutOfRangeError("step count must be >= 1");
  validate_problem(problem, options.feas_tol);

  DiscreteTrajectory traj;
  traj.n = n;
  traj.horizon = problem.horizon;
  traj.h = problem.horizon / static_cast<double>(n);
  traj.nodes.reserve(static_cast<std::size_t>(n) + 1);
  traj.stats.reserve(static_cast<std::size_t>(n));
  traj.nodes.push_back(problem.initial);

  Eigen::VectorXd warm;  // multipliers from the previous step
  for (int k = 0; k < n; ++k) {
    const double t_k = static_cast<double>(k) * traj.h;
    try {
      StepResult r = step(problem, t_k, traj.nodes.back(), traj.h,
                          warm.size() > 0 ? &warm : nullptr, options);
      warm = std::move(r.multipliers);
      traj.nodes.push_back(std::move(r.next));
      traj.stats.push_back(r.stats);
    } catch (const SolverError& e) {
      throw StepError(k, "step " + std::to_string(k) + " failed: " + e.what());
    }
    SWEEP_DEBUG("step %d/%d: iters=%d residual=%.3e disp=%.3e", k + 1, n,
                traj.stats.back().iterations, traj.stats.back().residual,
                traj.stats.back().displacement);
  }
  return traj;
}

namespace {

// Index of the grid interval containing t, robust to the rounding of k * h.
int interval_index(const DiscreteTrajectory& traj, double t) {
  const double slop = 1e-9 * std::max(1.0, traj.horizon);
  if (t < -slop || t > traj.horizon + slop) {
    throw OutOfRangeError("time " + std::to_string(t) + " outside [0, " +
                          std::to_string(traj.horizon) + "]");
  }
  t = std::clamp(t, 0.0, traj.horizon);
  int k = static_cast<int>(std::floor(t / traj.h));
  k = std::clamp(k, 0, traj.n - 1);
  while (k > 0 && t < traj.time_at(k)) --k;
  while (k < traj.n - 1 && t >= traj.time_at(k + 1)) ++k;
  return k;
}

}  // namespace

Configuration interpolate(const DiscreteTrajectory& traj, double t) {
  if (traj.nodes.size() != static_cast<std::size_t>(traj.n) + 1) {
    throw OutOfRangeError("trajectory is incomplete");
  }
  const double slop = 1e-9 * std::max(1.0, traj.horizon);
  if (t >= traj.horizon && t <= traj.horizon + slop) {
    return traj.nodes.back();
  }
  const int k = interval_index(traj, t);
  if (t == traj.time_at(k)) return traj.nodes[k];
  const double w = (t - traj.time_at(k)) / traj.h;
  return traj.nodes[k] + w * (traj.nodes[k + 1] - traj.nodes[k]);
}

std::pair<double, double> grid_maps(const DiscreteTrajectory& traj, double t) {
  const double slop = 1e-9 * std::max(1.0, traj.horizon);
  if (t >= traj.horizon && t <= traj.horizon + slop) {
    return {traj.horizon, traj.horizon};
  }
  const int k = interval_index(traj, t);
  return {traj.time_at(k), traj.time_at(k + 1)};
}

Eigen::VectorXd sampled_f(const SweepingProblem& problem,
                          const DiscreteTrajectory& traj, double t) {
  const double slop = 1e-9 * std::max(1.0, traj.horizon);
  if (t >= traj.horizon && t <= traj.horizon + slop) {
    return problem.perturbation(traj.time_at(traj.n - 1), traj.nodes[traj.n - 1]);
  }
  const int k = interval_index(traj, t);
  return problem.perturbation(traj.time_at(k), traj.nodes[k]);
}

double sup_error(const DiscreteTrajectory& a, const DiscreteTrajectory& b,
                 const std::vector<double>& samples) {
  if (a.dimension() != b.dimension()) {
    throw DimensionMismatchError("trajectories have different dimensions");
  }
  double worst = 0.0;
  for (const double t : samples) {
    worst = std::max(worst, (interpolate(a, t) - interpolate(b, t)).norm());
  }
  return worst;
}

}  // namespace sweep
