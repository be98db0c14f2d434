#pragma once

#include <vector>

#include <Eigen/Core>

#include "sweep/problem.hpp"
#include "sweep/tolerances.hpp"

namespace sweep {

/// One linearized constraint {x : <normal, x> >= offset}.
struct HalfSpace {
  Eigen::VectorXd normal;
  double offset = 0.0;
};

/// Intersection of half-spaces. Rows of normals() are the half-space
/// normals; an empty list is all of R^d.
class Polyhedron {
 public:
  explicit Polyhedron(int dimension) : dimension_(dimension) {}
  Polyhedron(Eigen::MatrixXd normals, Eigen::VectorXd offsets);
  Polyhedron(int dimension, const std::vector<HalfSpace>& halfspaces);

  int dimension() const { return dimension_; }
  int count() const { return static_cast<int>(offsets_.size()); }
  const Eigen::MatrixXd& normals() const { return normals_; }
  const Eigen::VectorXd& offsets() const { return offsets_; }
  HalfSpace halfspace(int i) const { return {normals_.row(i), offsets_[i]}; }

  /// Zero normals are rejected: the lower gradient bound makes them
  /// impossible for well-posed problems.
  void add(const HalfSpace& hs);

  /// <n_i, x> - offset_i for every i (nonnegative inside).
  Eigen::VectorXd slack(const Eigen::VectorXd& x) const;
  bool contains(const Eigen::VectorXd& x, double tol = tol::proj) const;

 private:
  int dimension_;
  Eigen::MatrixXd normals_;  // p x d
  Eigen::VectorXd offsets_;  // p
};

struct ProjectionOptions {
  double proj_tol = tol::proj;
  int max_iterations = 100000;  // multiplier sweeps
  /// Dual norms past infeasible_dual_factor * (1 + |y|) / min_i |n_i|
  /// without residual progress certify emptiness.
  double infeasible_dual_factor = 1e8;
};

struct ProjectionResult {
  Eigen::VectorXd point;
  Eigen::VectorXd multipliers;  // one nonnegative dual per half-space
  double residual = 0.0;        // max KKT violation, geometric units
  int iterations = 0;
};

/// Euclidean projection onto the polyhedron by dual ascent on the
/// multipliers of the projection QP: projected Gauss-Seidel sweeps
/// (coordinate-wise lambda_i <- max(0, lambda_i - slack_i / |n_i|^2),
/// tracking the point x = y + sum_i lambda_i n_i incrementally)
/// interleaved with a direct active-set solve that finishes the badly
/// conditioned contact clusters where sweep convergence crawls. Both paths
/// certify the same KKT residual before returning.
///
/// `warm_start` seeds the multipliers (pass the previous step's duals when
/// projecting a slowly moving point); it never changes the result beyond the
/// residual tolerance.
///
/// Throws InfeasibleError when the dual norm blows up without residual
/// progress (empty polyhedron) and MaxIterationsError, carrying the best
/// iterate, when the residual target is not met.
ProjectionResult project(const Eigen::VectorXd& y, const Polyhedron& poly,
                         const Eigen::VectorXd* warm_start = nullptr,
                         const ProjectionOptions& options = {});

/// Brute-force projection by enumerating active subsets: for every subset of
/// half-spaces solve the equality-constrained KKT system by a rank-revealing
/// factorization and return the primal-feasible candidate with nonnegative
/// multipliers. Exponential in the half-space count (maximum 20); this is the
/// reference the iterative solver is checked against.
Eigen::VectorXd project_oracle(const Eigen::VectorXd& y, const Polyhedron& poly,
                               double tol = 1e-9);

/// Distance from y to the polyhedron (0 when the list is empty).
double distance(const Eigen::VectorXd& y, const Polyhedron& poly,
                const ProjectionOptions& options = {});

/// Distance from y to one half-space: max(0, offset - <n, y>) / |n|.
double distance_single(const Eigen::VectorXd& y, const HalfSpace& hs);

/// Polyhedron of first-order constraint linearizations at (t, q):
/// half-space i is {x : g_i(t,q) + <grad g_i(t,q), x - q> >= 0}. Contained in
/// the feasible set Q(t) because each g_i(t, .) is convex. Throws
/// ZeroGradientError when a gradient norm falls below grad_floor.
Polyhedron linearize(const SweepingProblem& problem, double t,
                     const Configuration& q,
                     double grad_floor = tol::grad_floor);

/// Same, over a subset of the constraints (row r of the result is constraint
/// indices[r]).
Polyhedron linearize_subset(const SweepingProblem& problem, double t,
                            const Configuration& q,
                            const std::vector<int>& indices,
                            double grad_floor = tol::grad_floor);

}  // namespace sweep
