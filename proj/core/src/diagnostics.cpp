#include "sweep/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "sweep/projection.hpp"
#include "sweep/rng.hpp"

namespace sweep {

DerivedConstants derived_constants(const AssumptionParams& params) {
  validate_params(params);
  DerivedConstants c;
  c.eta = params.alpha / (params.m_bound * params.gamma);
  c.theta = 2.0 * params.gamma * params.beta / params.alpha;
  c.r_qual = std::min(4.0 * params.rho / (13.0 * params.beta),
                      params.alpha / (2.0 * params.m_bound * params.gamma));
  return c;
}

nlohmann::json to_json(const DiagnosticsReport& r) {
  return nlohmann::json{
      {"eta", r.eta},
      {"theta", r.theta},
      {"r_qual", r.r_qual},
      {"gamma_estimate", r.gamma_estimate},
      {"gradient_norm_min", r.gradient_norm_min},
      {"gradient_norm_max", r.gradient_norm_max},
      {"quadratic_bound_violations", r.quadratic_bound_violations},
      {"qualification_violations", r.qualification_violations},
      {"samples_used", r.samples_used},
      {"seed", r.seed},
      {"degenerate_gradients", r.degenerate_gradients},
  };
}

namespace {

// Ratio sum lambda_i |g_i| / |sum lambda_i g_i| for one weight vector;
// throws when the combination vanishes but the weights do not.
double weight_ratio(const Eigen::MatrixXd& grads, const Eigen::VectorXd& norms,
                    const Eigen::VectorXd& weights) {
  const double weighted_norms = weights.dot(norms);
  const double combined = (grads.transpose() * weights).norm();
  if (combined < tol::grad_floor * std::max(1.0, weighted_norms)) {
    if (weighted_norms > tol::grad_floor) {
      throw DegenerateGradientsError(
          "active gradients are positive-linearly dependent");
    }
    return 1.0;
  }
  return weighted_norms / combined;
}

}  // namespace

double estimate_gamma(const SweepingProblem& problem, double t,
                      const Configuration& q, double rho, int trials,
                      std::uint64_t seed) {
  const std::set<int> active = active_set(problem, t, q, rho);
  const int m = static_cast<int>(active.size());
  if (m <= 1) return 1.0;

  Eigen::MatrixXd grads(m, problem.dimension);
  Eigen::VectorXd norms(m);
  int r = 0;
  for (const int i : active) {
    grads.row(r) = problem.constraints[i].gradient(t, q);
    norms[r] = grads.row(r).norm();
    ++r;
  }

  double best = 1.0;
  // Coordinate directions all give ratio 1 but run through the degeneracy
  // detector for free.
  for (int i = 0; i < m; ++i) {
    best = std::max(best, weight_ratio(grads, norms, Eigen::VectorXd::Unit(m, i)));
  }
  best = std::max(best, weight_ratio(grads, norms, Eigen::VectorXd::Ones(m)));

  // Up to three active constraints: fine simplex grid, essentially the exact
  // convex program (ratios are scale-invariant in the weights).
  if (m == 2) {
    const int k = 1000;
    for (int a = 0; a <= k; ++a) {
      Eigen::VectorXd w(2);
      w << static_cast<double>(a) / k, static_cast<double>(k - a) / k;
      best = std::max(best, weight_ratio(grads, norms, w));
    }
  } else if (m == 3) {
    const int k = 100;
    for (int a = 0; a <= k; ++a) {
      for (int b = 0; b <= k - a; ++b) {
        Eigen::VectorXd w(3);
        w << static_cast<double>(a) / k, static_cast<double>(b) / k,
            static_cast<double>(k - a - b) / k;
        best = std::max(best, weight_ratio(grads, norms, w));
      }
    }
  }

  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(trial)));
    Eigen::VectorXd w(m);
    for (int i = 0; i < m; ++i) w[i] = rng.uniform();
    if (w.maxCoeff() <= 0.0) continue;
    best = std::max(best, weight_ratio(grads, norms, w));
  }
  return best;
}

std::vector<bool> check_quadratic_distance(const SweepingProblem& problem,
                                           const AssumptionParams& params,
                                           double t, const Configuration& q_tilde,
                                           const Configuration& q) {
  validate_params(params);
  const double bound = params.m_bound / (2.0 * params.alpha) *
                           (q - q_tilde).squaredNorm() +
                       tol::feas;
  std::vector<bool> ok;
  ok.reserve(problem.constraints.size());
  for (const Constraint& c : problem.constraints) {
    const double value = c.value(t, q_tilde);
    const Eigen::VectorXd grad = c.gradient(t, q_tilde);
    const HalfSpace hs{grad, grad.dot(q_tilde) - value};
    ok.push_back(distance_single(q, hs) <= bound);
  }
  return ok;
}

QualificationCheck check_metric_qualification(const SweepingProblem& problem,
                                              const AssumptionParams& params,
                                              double t,
                                              const Configuration& q_tilde,
                                              int sample_count,
                                              std::uint64_t seed) {
  const DerivedConstants dc = derived_constants(params);
  const Polyhedron poly = linearize(problem, t, q_tilde);
  QualificationCheck out;
  // Radius hypothesis of the qualification theorem; feasible anchors always
  // satisfy it (they lie in their own linearization).
  if (distance(q_tilde, poly) > dc.r_qual / 4.0) return out;

  const double radius = dc.r_qual / 4.0;
  for (int s = 0; s < sample_count; ++s) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
    const Configuration probe =
        q_tilde + rng.in_ball(problem.dimension, radius);
    const double lhs = distance(probe, poly);
    double rhs = 0.0;
    for (int i = 0; i < poly.count(); ++i) {
      rhs += distance_single(probe, poly.halfspace(i));
    }
    ++out.samples_checked;
    if (lhs > dc.theta * rhs + tol::feas) ++out.violations;
  }
  return out;
}

std::pair<double, std::vector<double>> estimate_step_distance(
    const DiscreteTrajectory& traj) {
  std::vector<double> ratios;
  ratios.reserve(traj.stats.size());
  double worst = 0.0;
  for (const StepStats& s : traj.stats) {
    const double ratio = traj.h > 0.0 ? s.set_motion / traj.h : 0.0;
    ratios.push_back(ratio);
    worst = std::max(worst, ratio);
  }
  return {worst, std::move(ratios)};
}

}  // namespace sweep
