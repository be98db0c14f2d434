#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace sweep {

/// Base class for every failure the solver can raise.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A constraint evaluator returned a non-finite value.
class EvaluationError : public SolverError {
 public:
  EvaluationError(int index, const std::string& what)
      : SolverError(what), index(index) {}
  int index;
};

/// A constraint gradient fell below the representable floor; the lower
/// gradient bound is violated at this point.
class ZeroGradientError : public SolverError {
 public:
  ZeroGradientError(int index, const std::string& what)
      : SolverError(what), index(index) {}
  int index;
};

/// Dual blowup certified that the polyhedron is (numerically) empty.
class InfeasibleError : public SolverError {
 public:
  InfeasibleError(double dual_norm, const std::string& what)
      : SolverError(what), dual_norm(dual_norm) {}
  double dual_norm;
};

/// Projection did not reach the requested residual; carries the best iterate.
class MaxIterationsError : public SolverError {
 public:
  MaxIterationsError(Eigen::VectorXd best_point, double residual,
                     const std::string& what)
      : SolverError(what), best_point(std::move(best_point)), residual(residual) {}
  Eigen::VectorXd best_point;
  double residual;
};

class OutOfRangeError : public SolverError {
 public:
  using SolverError::SolverError;
};

class DimensionMismatchError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Two disk centers coincide; the pair gradient is undefined there.
class CoincidentCentersError : public SolverError {
 public:
  CoincidentCentersError(int i, int j, const std::string& what)
      : SolverError(what), i(i), j(j) {}
  int i;
  int j;
};

class PlacementFailureError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// A nonnegative combination of active gradients vanished: the active
/// gradients are positive-linearly dependent (constraint qualification fails).
class DegenerateGradientsError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Subset enumeration found no KKT point: the polyhedron is empty.
class NoKktPointError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// A time step failed; wraps the underlying error with the step index.
class StepError : public SolverError {
 public:
  StepError(int step_index, const std::string& what)
      : SolverError(what), step_index(step_index) {}
  int step_index;
};

class ConfigError : public SolverError {
 public:
  using SolverError::SolverError;
};

}  // namespace sweep
