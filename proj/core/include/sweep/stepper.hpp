#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "sweep/problem.hpp"
#include "sweep/projection.hpp"

namespace sweep {

/// Per-step solver record.
struct StepStats {
  int iterations = 0;        // projection iterations
  double residual = 0.0;     // projection KKT residual
  double prediction_gap = 0.0;  // d_{Qc}(q_k + h f), distance moved by the correction
  double set_motion = 0.0;      // d_{Qc(t_{k+1}, q_k)}(q_k), how far the set swept q_k
  double displacement = 0.0;    // |q_{k+1} - q_k|
  int constraints_used = 0;     // rows in the step polyhedron (p unless filtered)
};

/// Nodes q_k on the uniform grid t_k = k h, h = horizon / n, plus the
/// piecewise linear interpolation machinery.
struct DiscreteTrajectory {
  int n = 0;
  double h = 0.0;
  double horizon = 0.0;
  std::vector<Configuration> nodes;  // n + 1 entries
  std::vector<StepStats> stats;      // n entries

  double time_at(int k) const { return static_cast<double>(k) * h; }
  int dimension() const { return nodes.empty() ? 0 : static_cast<int>(nodes.front().size()); }

  /// max_k |q_{k+1} - q_k| / h, an empirical discrete velocity bound.
  double max_velocity() const;
  /// max_k d_{Qc(t_{k+1}, q_k)}(q_k) / h, an empirical set-motion bound.
  double max_set_motion_rate() const;
};

struct StepResult {
  Configuration next;
  StepStats stats;
  Eigen::VectorXd multipliers;  // duals of the correction, for warm starts
};

struct StepOptions {
  ProjectionOptions projection;
  double feas_tol = tol::feas;
  /// Measure d_{Qc(t_{k+1}, q_k)}(q_k) with an extra projection when the
  /// problem has time-varying constraints. Static constraint sets always give
  /// zero, so the solve is skipped for them regardless.
  bool record_set_motion = true;
};

/// One prediction-correction step: Euler-predict q_k + h f(t_k, q_k), then
/// project onto the linearized inner approximation built at (t_k + h, q_k).
/// The result is feasible at t_k + h (the linearization is contained in the
/// feasible set). `warm_start` carries the previous step's multipliers.
StepResult step(const SweepingProblem& problem, double t_k, const Configuration& q_k,
                double h, const Eigen::VectorXd* warm_start = nullptr,
                const StepOptions& options = {});

/// Run the scheme over the whole grid. Deterministic: identical inputs give
/// bit-identical node lists. Throws StepError with the failing step index if
/// a projection fails (typically the step size is too large for the set
/// motion).
DiscreteTrajectory solve(const SweepingProblem& problem, int n,
                         const StepOptions& options = {});

/// Piecewise linear interpolant; exact at the nodes.
Configuration interpolate(const DiscreteTrajectory& traj, double t);

/// Grid maps (rho, theta): the surrounding node times t_k, t_{k+1} for
/// t in [t_k, t_{k+1}), both equal to the horizon at t = horizon.
std::pair<double, double> grid_maps(const DiscreteTrajectory& traj, double t);

/// The piecewise constant sampled perturbation: f(t_k, q_k) for t in
/// [t_k, t_{k+1}), left-endpoint values, f(t_{n-1}, q_{n-1}) at the horizon.
Eigen::VectorXd sampled_f(const SweepingProblem& problem,
                          const DiscreteTrajectory& traj, double t);

/// max over the sample times of |a(t) - b(t)| between the two interpolants.
double sup_error(const DiscreteTrajectory& a, const DiscreteTrajectory& b,
                 const std::vector<double>& samples);

}  // namespace sweep
