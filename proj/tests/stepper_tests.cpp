#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "sweep/builtins.hpp"
#include "sweep/stepper.hpp"

using namespace sweep;

TEST_CASE("step: stationary feasible point with no drift stays put") {
  SweepingProblem p = testing::scalar_problem(
      [](double, double q) { return q; }, [](double, double) { return 1.0; },
      2.0, 1.0, [](double, double) { return 0.0; }, false);
  const StepResult r = step(p, 0.0, p.initial, 0.1);
  CHECK(r.next[0] == 2.0);
  CHECK(r.stats.displacement == 0.0);
}

TEST_CASE("step: moving wall pushes exactly onto the new wall position") {
  const SweepingProblem p = builtins::make("moving-wall-1d");
  const double h = 0.125;
  const Eigen::VectorXd q_k = Eigen::VectorXd::Constant(1, 0.25);
  const StepResult r = step(p, 0.25, q_k, h);
  CHECK(r.next[0] == doctest::Approx(0.375).epsilon(1e-15));
  // The wall advanced by exactly h, so that is the recorded set motion.
  CHECK(r.stats.set_motion == doctest::Approx(h).epsilon(1e-12));
}

TEST_CASE("step: static wall blocks a constant push") {
  const SweepingProblem p = builtins::make("static-wall-push-1d");
  const StepResult r = step(p, 0.0, p.initial, 0.05);
  CHECK(r.next[0] == 0.0);
}

TEST_CASE("solve: no constraints reduces to explicit Euler") {
  SweepingProblem p;
  p.dimension = 1;
  p.horizon = 1.0;
  p.initial = Eigen::VectorXd::Zero(1);
  p.perturbation = [](double, const Configuration&) {
    return Eigen::VectorXd(Eigen::VectorXd::Ones(1));
  };
  const DiscreteTrajectory traj = solve(p, 10);
  for (int k = 0; k <= 10; ++k) {
    CHECK(traj.nodes[k][0] == doctest::Approx(k / 10.0).epsilon(1e-15));
  }
}

TEST_CASE("solve: moving wall is node-exact for every n") {
  const SweepingProblem p = builtins::make("moving-wall-1d");
  for (const int n : {2, 7, 33, 100}) {
    const DiscreteTrajectory traj = solve(p, n);
    for (int k = 0; k <= n; ++k) {
      CHECK(std::abs(traj.nodes[k][0] - traj.time_at(k)) <= 1e-12);
    }
    // Cauchy refinement against the closed form at off-node times too.
    Rng rng(n);
    for (int s = 0; s < 20; ++s) {
      const double t = rng.uniform(0.0, 1.0);
      CHECK(std::abs(interpolate(traj, t)[0] -
                     builtins::exact_solution("moving-wall-1d", t)[0]) <= 1e-12);
    }
  }
}

TEST_CASE("solve: head-on disks freeze after contact") {
  const SweepingProblem p = builtins::make("two-disk-headon");
  const int n = 200;
  const DiscreteTrajectory traj = solve(p, n);
  // Contact once the gap closes: |x1 - x2| = 2r at t* = 0.3.
  bool contacted = false;
  for (int k = 0; k < n; ++k) {
    const double gap = (traj.nodes[k].head<2>() - traj.nodes[k].tail<2>()).norm() - 0.4;
    if (!contacted && gap <= 1e-9) contacted = true;
    if (contacted) {
      CHECK(traj.stats[k].displacement <= 10.0 * tol::proj);
    }
  }
  CHECK(contacted);
}

TEST_CASE("solve: feasibility margin along every builtin") {
  for (const std::string& name : builtins::names()) {
    const SweepingProblem p = builtins::make(name);
    const DiscreteTrajectory traj = solve(p, 64);
    for (int k = 0; k <= traj.n; ++k) {
      CHECK(min_constraint_value(p, traj.time_at(k), traj.nodes[k]) >= -tol::feas);
    }
  }
}

TEST_CASE("solve: deterministic node lists") {
  const SweepingProblem p = builtins::make("two-disk-headon");
  const DiscreteTrajectory a = solve(p, 97);
  const DiscreteTrajectory b = solve(p, 97);
  for (int k = 0; k <= a.n; ++k) {
    CHECK((a.nodes[k] - b.nodes[k]).norm() == 0.0);
  }
}

TEST_CASE("solve: velocity and set-motion rates stay bounded under refinement") {
  const SweepingProblem p = builtins::make("halfplane-sweep-2d");
  double previous_velocity = 0.0;
  for (const int n : {10, 40, 160}) {
    const DiscreteTrajectory traj = solve(p, n);
    // The analytic solution moves at speed sqrt(2); the discrete velocity
    // bound must not grow as the grid refines.
    const double v = traj.max_velocity();
    CHECK(v <= std::sqrt(2.0) + 1e-9);
    if (previous_velocity > 0.0) CHECK(v <= previous_velocity + 1e-9);
    previous_velocity = v;
    CHECK(traj.max_set_motion_rate() <= 1.0 + 1e-9);
  }
}

TEST_CASE("solve: failing step carries its index") {
  // The wall moves so fast that the very first projection is infeasible:
  // two opposing walls squeeze to an empty intersection.
  SweepingProblem p;
  p.dimension = 1;
  p.horizon = 1.0;
  p.initial = Eigen::VectorXd::Zero(1);
  Constraint lower, upper;
  lower.value = [](double t, const Configuration& q) { return q[0] - 10.0 * t; };
  lower.gradient = [](double, const Configuration&) {
    return Eigen::VectorXd(Eigen::VectorXd::Ones(1));
  };
  upper.value = [](double t, const Configuration& q) { return -q[0] - 10.0 * t + 0.5; };
  upper.gradient = [](double, const Configuration&) {
    return Eigen::VectorXd(-Eigen::VectorXd::Ones(1));
  };
  p.constraints.push_back(std::move(lower));
  p.constraints.push_back(std::move(upper));
  p.perturbation = [](double, const Configuration&) {
    return Eigen::VectorXd(Eigen::VectorXd::Zero(1));
  };
  try {
    solve(p, 10);
    FAIL("expected StepError");
  } catch (const StepError& e) {
    CHECK(e.step_index >= 0);
  }
}

TEST_CASE("interpolate: node identity, midpoints, endpoint") {
  const SweepingProblem p = builtins::make("halfplane-sweep-2d");
  const DiscreteTrajectory traj = solve(p, 10);
  for (int k = 0; k <= 10; ++k) {
    CHECK((interpolate(traj, traj.time_at(k)) - traj.nodes[k]).norm() == 0.0);
  }
  const Eigen::VectorXd mid = interpolate(traj, 0.25);
  CHECK((mid - 0.5 * (traj.nodes[2] + traj.nodes[3])).norm() <= 1e-15);
  CHECK((interpolate(traj, 1.0) - traj.nodes[10]).norm() == 0.0);
  CHECK_THROWS_AS(interpolate(traj, -0.1), OutOfRangeError);
  CHECK_THROWS_AS(interpolate(traj, 1.1), OutOfRangeError);
}

TEST_CASE("grid_maps conventions") {
  const SweepingProblem p = builtins::make("moving-wall-1d");
  const DiscreteTrajectory traj = solve(p, 10);
  const auto [rho, theta] = grid_maps(traj, 0.25);
  CHECK(rho == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(theta == doctest::Approx(0.3).epsilon(1e-15));
  const auto at_node = grid_maps(traj, traj.time_at(4));
  CHECK(at_node.first == traj.time_at(4));
  CHECK(at_node.second == traj.time_at(5));
  const auto at_end = grid_maps(traj, 1.0);
  CHECK(at_end.first == 1.0);
  CHECK(at_end.second == 1.0);
}

TEST_CASE("sampled_f: left endpoint values and the horizon convention") {
  SweepingProblem p = testing::scalar_problem(
      [](double, double) { return 1.0; }, [](double, double) { return 1.0; },
      0.0, 1.0, [](double t, double) { return t; }, false);
  const DiscreteTrajectory traj = solve(p, 2);
  CHECK(sampled_f(p, traj, 0.75)[0] == 0.5);
  CHECK(sampled_f(p, traj, 0.2)[0] == 0.0);
  CHECK(sampled_f(p, traj, 1.0)[0] == 0.5);  // f(t_{n-1}, q_{n-1})

  // Autonomous field: any t inside step k samples f(q_k).
  const SweepingProblem headon = builtins::make("two-disk-headon");
  const DiscreteTrajectory ht = solve(headon, 4);
  const Eigen::VectorXd fk = headon.perturbation(ht.time_at(1), ht.nodes[1]);
  CHECK((sampled_f(headon, ht, 0.3) - fk).norm() == 0.0);
}

TEST_CASE("sup_error basics and the ten-sample proxy") {
  SweepingProblem zero = testing::scalar_problem(
      [](double, double) { return 1.0; }, [](double, double) { return 1.0; },
      0.0, 1.0, [](double, double) { return 0.0; }, false);
  const DiscreteTrajectory a = solve(zero, 10);
  CHECK(sup_error(a, a, {0.1, 0.5, 1.0}) == 0.0);

  SweepingProblem one = zero;
  one.initial = Eigen::VectorXd::Ones(1);
  const DiscreteTrajectory b = solve(one, 5);
  std::vector<double> proxy_times;
  for (int i = 1; i <= 10; ++i) proxy_times.push_back(i * 1.0 / 10.0);
  CHECK(sup_error(a, b, proxy_times) == doctest::Approx(1.0));

  const SweepingProblem plane = builtins::make("halfplane-sweep-2d");
  const DiscreteTrajectory c = solve(plane, 10);
  CHECK_THROWS_AS(sup_error(a, c, proxy_times), DimensionMismatchError);
}
