#pragma once

#include <filesystem>
#include <string>

#include "sweep/problem.hpp"
#include "sweep/projection.hpp"
#include "sweep/rng.hpp"

namespace sweep::testing {

/// One-constraint 1D problem from plain lambdas; keeps test bodies short.
inline SweepingProblem scalar_problem(
    std::function<double(double, double)> g,
    std::function<double(double, double)> dg, double q0, double horizon,
    std::function<double(double, double)> f, bool time_varying = true) {
  SweepingProblem p;
  p.dimension = 1;
  p.horizon = horizon;
  p.initial = Eigen::VectorXd::Constant(1, q0);
  Constraint c;
  c.value = [g](double t, const Configuration& q) { return g(t, q[0]); };
  c.gradient = [dg](double t, const Configuration& q) {
    return Eigen::VectorXd(Eigen::VectorXd::Constant(1, dg(t, q[0])));
  };
  c.time_varying = time_varying;
  p.constraints.push_back(std::move(c));
  p.perturbation = [f](double t, const Configuration& q) {
    return Eigen::VectorXd(Eigen::VectorXd::Constant(1, f(t, q[0])));
  };
  return p;
}

/// Random polyhedron guaranteed nonempty: every half-space keeps a random
/// interior point strictly feasible.
inline Polyhedron random_polyhedron(Rng& rng, int dimension, int count) {
  const Eigen::VectorXd interior = rng.uniform_vector(dimension, -1.0, 1.0);
  Eigen::MatrixXd normals(count, dimension);
  Eigen::VectorXd offsets(count);
  for (int i = 0; i < count; ++i) {
    Eigen::VectorXd n(dimension);
    do {
      for (int j = 0; j < dimension; ++j) n[j] = rng.gaussian();
    } while (n.norm() < 1e-3);
    n *= rng.uniform(0.5, 2.0) / n.norm();
    normals.row(i) = n;
    offsets[i] = n.dot(interior) - rng.uniform(0.0, 1.0);
  }
  return Polyhedron(std::move(normals), std::move(offsets));
}

/// Fresh temporary directory under the system temp root.
inline std::string temp_dir(const std::string& tag) {
  const auto path = std::filesystem::temp_directory_path() /
                    ("sweep_test_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(path);
  std::filesystem::create_directories(path);
  return path.string();
}

}  // namespace sweep::testing
