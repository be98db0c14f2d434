#include "sweep/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

namespace sweep {

Polyhedron::Polyhedron(Eigen::MatrixXd normals, Eigen::VectorXd offsets)
    : dimension_(static_cast<int>(normals.cols())),
      normals_(std::move(normals)),
      offsets_(std::move(offsets)) {
  if (normals_.rows() != offsets_.size()) {
    throw DimensionMismatchError("half-space count mismatch between normals and offsets");
  }
  for (int i = 0; i < normals_.rows(); ++i) {
    if (normals_.row(i).norm() <= tol::grad_floor) {
      throw ZeroGradientError(i, "half-space " + std::to_string(i) + " has a zero normal");
    }
  }
}

Polyhedron::Polyhedron(int dimension, const std::vector<HalfSpace>& halfspaces)
    : dimension_(dimension) {
  normals_.resize(static_cast<Eigen::Index>(halfspaces.size()), dimension);
  offsets_.resize(static_cast<Eigen::Index>(halfspaces.size()));
  for (std::size_t i = 0; i < halfspaces.size(); ++i) {
    if (halfspaces[i].normal.size() != dimension) {
      throw DimensionMismatchError("half-space " + std::to_string(i) +
                                   " has the wrong dimension");
    }
    if (halfspaces[i].normal.norm() <= tol::grad_floor) {
      throw ZeroGradientError(static_cast<int>(i),
                              "half-space " + std::to_string(i) + " has a zero normal");
    }
    normals_.row(static_cast<Eigen::Index>(i)) = halfspaces[i].normal;
    offsets_[static_cast<Eigen::Index>(i)] = halfspaces[i].offset;
  }
}

void Polyhedron::add(const HalfSpace& hs) {
  if (hs.normal.size() != dimension_) {
    throw DimensionMismatchError("half-space has the wrong dimension");
  }
  if (hs.normal.norm() <= tol::grad_floor) {
    throw ZeroGradientError(count(), "half-space has a zero normal");
  }
  normals_.conservativeResize(normals_.rows() + 1, dimension_);
  normals_.row(normals_.rows() - 1) = hs.normal;
  offsets_.conservativeResize(offsets_.size() + 1);
  offsets_[offsets_.size() - 1] = hs.offset;
}

Eigen::VectorXd Polyhedron::slack(const Eigen::VectorXd& x) const {
  if (count() == 0) return Eigen::VectorXd();
  return normals_ * x - offsets_;
}

bool Polyhedron::contains(const Eigen::VectorXd& x, double tol) const {
  for (int i = 0; i < count(); ++i) {
    const double s = normals_.row(i).dot(x) - offsets_[i];
    if (s < -tol * normals_.row(i).norm()) return false;
  }
  return true;
}

namespace {

// Max KKT violation in geometric units: half-space penetration depth and
// complementarity, both scaled by the normal lengths.
double kkt_residual(const Eigen::VectorXd& lambda, const Eigen::VectorXd& slack,
                    const Eigen::VectorXd& row_norms) {
  double residual = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    const double s_hat = slack[i] / row_norms[i];
    const double l_hat = lambda[i] * row_norms[i];
    residual = std::max(residual, std::abs(std::min(l_hat, s_hat)));
  }
  return residual;
}

// Exact solve of the dual restricted to a subset of rows:
//   min 1/2 mu^T G mu - s^T mu  over mu >= 0,
// by a Lawson-Hanson active-set iteration extended for rank-deficient G
// (redundant contacts): an inconsistent passive system means the passive set
// is too big, and the least-squares residual is a null-space ascent
// direction whose ray hits the boundary at the coordinate to drop. The
// support selection is exactly what the sweeps cannot do fast.
Eigen::VectorXd restricted_nnls(const Eigen::MatrixXd& G, const Eigen::VectorXd& s,
                                double proj_tol) {
  const int m = static_cast<int>(G.rows());
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(m);
  std::vector<bool> passive(m, false);
  const double tol = 1e-12 * std::max(1.0, s.cwiseAbs().maxCoeff());
  const double consistency_tol = 0.1 * proj_tol;

  for (int outer = 0; outer < 4 * m + 16; ++outer) {
    const Eigen::VectorXd w = s - G * mu;
    int entering = -1;
    double best = tol;
    for (int i = 0; i < m; ++i) {
      if (!passive[i] && w[i] > best) {
        best = w[i];
        entering = i;
      }
    }
    if (entering < 0) break;
    passive[entering] = true;

    for (int inner = 0; inner < 4 * m + 16; ++inner) {
      std::vector<int> P;
      for (int i = 0; i < m; ++i) {
        if (passive[i]) P.push_back(i);
      }
      if (P.empty()) break;
      const int mp = static_cast<int>(P.size());
      Eigen::MatrixXd Gpp(mp, mp);
      Eigen::VectorXd sp(mp);
      for (int a = 0; a < mp; ++a) {
        sp[a] = s[P[a]];
        for (int b = 0; b < mp; ++b) Gpp(a, b) = G(P[a], P[b]);
      }
      const Eigen::VectorXd z = Gpp.completeOrthogonalDecomposition().solve(sp);

      const Eigen::VectorXd ls_residual = sp - Gpp * z;
      if (ls_residual.lpNorm<Eigen::Infinity>() > consistency_tol) {
        // No point makes all passive rows exactly active. The residual lies
        // in the null space of Gpp and improves the objective linearly, so
        // march until a coordinate hits zero and drop it.
        double t_star = std::numeric_limits<double>::infinity();
        for (int r = 0; r < mp; ++r) {
          if (ls_residual[r] < -tol) {
            t_star = std::min(t_star, -mu[P[r]] / ls_residual[r]);
          }
        }
        if (!std::isfinite(t_star)) return mu;  // cannot happen for nonempty sets
        for (int r = 0; r < mp; ++r) {
          mu[P[r]] = std::max(0.0, mu[P[r]] + t_star * ls_residual[r]);
          if (mu[P[r]] <= tol) {
            mu[P[r]] = 0.0;
            passive[P[r]] = false;
          }
        }
        continue;
      }

      double z_min = 0.0;
      for (int r = 0; r < mp; ++r) z_min = std::min(z_min, z[r]);
      if (z_min >= -tol) {
        for (int r = 0; r < mp; ++r) mu[P[r]] = std::max(0.0, z[r]);
        break;
      }
      // Step toward z until the first passive coordinate hits zero.
      double alpha = 1.0;
      for (int r = 0; r < mp; ++r) {
        if (z[r] < 0.0) alpha = std::min(alpha, mu[P[r]] / (mu[P[r]] - z[r]));
      }
      for (int r = 0; r < mp; ++r) {
        mu[P[r]] += alpha * (z[r] - mu[P[r]]);
        if (mu[P[r]] <= tol) {
          mu[P[r]] = 0.0;
          passive[P[r]] = false;
        }
      }
    }
  }
  return mu;
}

// Direct finisher on the near-active rows: the sweeps identify which
// half-spaces matter long before the multipliers settle on ill-conditioned
// contact clusters, so hand the cluster to the exact restricted solver and
// certify the result. Grows the working set and repeats if the candidate
// violates anything it left out.
bool try_active_set_polish(const Eigen::MatrixXd& A,
                           const Eigen::VectorXd& violation,
                           const Eigen::VectorXd& row_norms,
                           const Eigen::VectorXd& lambda,
                           const Eigen::VectorXd& slack, double proj_tol,
                           Eigen::VectorXd& out_lambda, double& out_residual) {
  std::vector<int> working;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda[i] > 0.0 || slack[i] < 0.0) working.push_back(static_cast<int>(i));
  }
  if (working.empty() || working.size() > 4096) return false;

  for (int round = 0; round < 16; ++round) {
    const int m = static_cast<int>(working.size());
    Eigen::MatrixXd Aw(m, A.cols());
    Eigen::VectorXd sw(m);
    for (int r = 0; r < m; ++r) {
      Aw.row(r) = A.row(working[r]);
      sw[r] = violation[working[r]];
    }
    const Eigen::VectorXd mu = restricted_nnls(Aw * Aw.transpose(), sw, proj_tol);

    Eigen::VectorXd full = Eigen::VectorXd::Zero(lambda.size());
    for (int r = 0; r < m; ++r) full[working[r]] = mu[r];
    const Eigen::VectorXd candidate_slack = A * (A.transpose() * full) - violation;

    // Everything the restricted solve ignored must already be satisfied;
    // otherwise pull the violated rows in and solve again.
    int added = 0;
    for (Eigen::Index i = 0; i < candidate_slack.size(); ++i) {
      if (candidate_slack[i] < -0.5 * proj_tol * row_norms[i] &&
          std::find(working.begin(), working.end(), static_cast<int>(i)) ==
              working.end()) {
        working.push_back(static_cast<int>(i));
        ++added;
      }
    }
    if (added > 0) continue;

    const double residual = kkt_residual(full, candidate_slack, row_norms);
    if (residual > proj_tol) return false;
    out_lambda = std::move(full);
    out_residual = residual;
    return true;
  }
  return false;
}

}  // namespace

ProjectionResult project(const Eigen::VectorXd& y, const Polyhedron& poly,
                         const Eigen::VectorXd* warm_start,
                         const ProjectionOptions& options) {
  const int p = poly.count();
  if (poly.dimension() != y.size()) {
    throw DimensionMismatchError("projection input has the wrong dimension");
  }
  ProjectionResult result;
  if (p == 0) {
    result.point = y;
    result.multipliers = Eigen::VectorXd();
    return result;
  }

  const Eigen::MatrixXd& A = poly.normals();
  Eigen::VectorXd row_norms(p);
  Eigen::VectorXd diag(p);
  for (int i = 0; i < p; ++i) {
    row_norms[i] = A.row(i).norm();
    diag[i] = row_norms[i] * row_norms[i];
  }

  // Violations of y itself; nothing to do when y is already inside.
  const Eigen::VectorXd violation = poly.offsets() - A * y;
  if ((violation.array() <= 0.0).all()) {
    result.point = y;
    result.multipliers = Eigen::VectorXd::Zero(p);
    return result;
  }

  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(p);
  if (warm_start != nullptr && warm_start->size() == p) {
    lambda = warm_start->cwiseMax(0.0);
  }
  Eigen::VectorXd shift = A.transpose() * lambda;  // x - y, kept incremental

  const double dual_scale = (1.0 + y.norm()) / row_norms.minCoeff();
  const double dual_bound = options.infeasible_dual_factor * dual_scale;

  Eigen::VectorXd best_lambda = lambda;
  double best_residual = std::numeric_limits<double>::infinity();
  double window_residual = std::numeric_limits<double>::infinity();
  double window_norm = 0.0;

  // One iteration is a projected Gauss-Seidel sweep over the multipliers;
  // each coordinate solves its own complementarity condition against the
  // current point and the shift tracks the point incrementally.
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    for (int i = 0; i < p; ++i) {
      const double slack_i = A.row(i).dot(shift) - violation[i];
      const double delta =
          std::max(0.0, lambda[i] - slack_i / diag[i]) - lambda[i];
      if (delta != 0.0) {
        lambda[i] += delta;
        shift += delta * A.row(i).transpose();
      }
    }

    const Eigen::VectorXd slack = A * shift - violation;
    const double residual = kkt_residual(lambda, slack, row_norms);
    if (residual < best_residual) {
      best_residual = residual;
      best_lambda = lambda;
    }
    if (residual <= options.proj_tol) {
      result.point = y + shift;
      result.multipliers = lambda;
      result.residual = residual;
      result.iterations = iter;
      return result;
    }

    if ((iter & 0x7) == 2 || iter == options.max_iterations) {
      Eigen::VectorXd polished;
      double polished_residual = 0.0;
      if (try_active_set_polish(A, violation, row_norms, lambda, slack,
                                options.proj_tol, polished, polished_residual)) {
        result.point = y + A.transpose() * polished;
        result.multipliers = std::move(polished);
        result.residual = polished_residual;
        result.iterations = iter;
        return result;
      }
    }

    // Bounded multipliers are guaranteed for nonempty polyhedra under the
    // constraint qualification; dual growth without residual progress is a
    // Farkas certificate of emptiness.
    if ((iter & 0xff) == 0) {
      const double lambda_norm = lambda.norm();
      const bool stalled = residual > 0.999 * window_residual;
      const bool growing = lambda_norm > 2.0 * window_norm &&
                           lambda_norm > 10.0 * dual_scale;
      if (lambda_norm > dual_bound || (stalled && growing)) {
        throw InfeasibleError(lambda_norm,
                              "projection dual diverged: polyhedron is empty");
      }
      window_residual = residual;
      window_norm = lambda_norm;
    }
  }

  throw MaxIterationsError(y + A.transpose() * best_lambda, best_residual,
                           "projection did not reach the residual target after " +
                               std::to_string(options.max_iterations) +
                               " sweeps (best residual " +
                               std::to_string(best_residual) + ")");
}

Eigen::VectorXd project_oracle(const Eigen::VectorXd& y, const Polyhedron& poly,
                               double tol) {
  const int p = poly.count();
  if (p > 20) {
    throw OutOfRangeError("oracle enumeration is limited to 20 half-spaces");
  }
  const Eigen::MatrixXd& A = poly.normals();
  const Eigen::VectorXd& b = poly.offsets();
  Eigen::VectorXd row_norms(p);
  for (int i = 0; i < p; ++i) row_norms[i] = A.row(i).norm();

  const auto feasible = [&](const Eigen::VectorXd& x) {
    for (int i = 0; i < p; ++i) {
      if (A.row(i).dot(x) - b[i] < -tol * row_norms[i]) return false;
    }
    return true;
  };

  bool found = false;
  double best_dist2 = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best;

  for (std::uint32_t mask = 0; mask < (1u << p); ++mask) {
    std::vector<int> active;
    for (int i = 0; i < p; ++i) {
      if (mask & (1u << i)) active.push_back(i);
    }
    Eigen::VectorXd x;
    if (active.empty()) {
      x = y;
    } else {
      const int m = static_cast<int>(active.size());
      Eigen::MatrixXd An(m, poly.dimension());
      Eigen::VectorXd sn(m);
      for (int r = 0; r < m; ++r) {
        An.row(r) = A.row(active[r]);
        sn[r] = b[active[r]] - A.row(active[r]).dot(y);
      }
      // Equality-constrained least squares: x = y + An^T mu with
      // (An An^T) mu = sn, solved rank-revealingly.
      const Eigen::MatrixXd G = An * An.transpose();
      const Eigen::VectorXd mu =
          G.completeOrthogonalDecomposition().solve(sn);
      if (mu.minCoeff() < -tol) continue;
      x = y + An.transpose() * mu;
      // Skip subsets whose equality system the least-squares solve could not
      // actually satisfy (inconsistent subset).
      bool consistent = true;
      for (int r = 0; r < m; ++r) {
        if (std::abs(An.row(r).dot(x) - b[active[r]]) >
            tol * (1.0 + row_norms[active[r]]) * (1.0 + y.norm())) {
          consistent = false;
          break;
        }
      }
      if (!consistent) continue;
    }
    if (!feasible(x)) continue;
    const double dist2 = (x - y).squaredNorm();
    if (!found || dist2 < best_dist2) {
      found = true;
      best_dist2 = dist2;
      best = x;
    }
  }

  if (!found) {
    throw NoKktPointError("no subset yields a KKT point: polyhedron is empty");
  }
  return best;
}

double distance(const Eigen::VectorXd& y, const Polyhedron& poly,
                const ProjectionOptions& options) {
  if (poly.count() == 0) return 0.0;
  return (project(y, poly, nullptr, options).point - y).norm();
}

double distance_single(const Eigen::VectorXd& y, const HalfSpace& hs) {
  const double n = hs.normal.norm();
  return std::max(0.0, hs.offset - hs.normal.dot(y)) / n;
}

namespace {

void linearize_row(const SweepingProblem& problem, double t,
                   const Configuration& q, int index, double grad_floor,
                   Eigen::MatrixXd& normals, Eigen::VectorXd& offsets, int row) {
  const Constraint& c = problem.constraints[index];
  const double value = c.value(t, q);
  if (!std::isfinite(value)) {
    throw EvaluationError(index, "constraint " + std::to_string(index) +
                                     " evaluated to a non-finite value");
  }
  const Eigen::VectorXd grad = c.gradient(t, q);
  if (!grad.allFinite()) {
    throw EvaluationError(index, "constraint " + std::to_string(index) +
                                     " gradient has non-finite entries");
  }
  if (grad.norm() < grad_floor) {
    throw ZeroGradientError(index, "constraint " + std::to_string(index) +
                                       " gradient vanished at the linearization point");
  }
  normals.row(row) = grad;
  offsets[row] = grad.dot(q) - value;
}

}  // namespace

Polyhedron linearize(const SweepingProblem& problem, double t,
                     const Configuration& q, double grad_floor) {
  const int p = static_cast<int>(problem.constraints.size());
  Eigen::MatrixXd normals(p, problem.dimension);
  Eigen::VectorXd offsets(p);
  for (int i = 0; i < p; ++i) {
    linearize_row(problem, t, q, i, grad_floor, normals, offsets, i);
  }
  return Polyhedron(std::move(normals), std::move(offsets));
}

Polyhedron linearize_subset(const SweepingProblem& problem, double t,
                            const Configuration& q,
                            const std::vector<int>& indices, double grad_floor) {
  const int m = static_cast<int>(indices.size());
  Eigen::MatrixXd normals(m, problem.dimension);
  Eigen::VectorXd offsets(m);
  for (int r = 0; r < m; ++r) {
    linearize_row(problem, t, q, indices[r], grad_floor, normals, offsets, r);
  }
  return Polyhedron(std::move(normals), std::move(offsets));
}

}  // namespace sweep
