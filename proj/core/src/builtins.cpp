#include "sweep/builtins.hpp"

#include <algorithm>

#include "sweep/crowd.hpp"

namespace sweep::builtins {

namespace {

constexpr const char* kMovingWall = "moving-wall-1d";
constexpr const char* kStaticWallPush = "static-wall-push-1d";
constexpr const char* kTwoDiskHeadon = "two-disk-headon";
constexpr const char* kHalfplaneSweep = "halfplane-sweep-2d";

constexpr double kDiskRadius = 0.2;
constexpr double kDiskStart = 0.5;  // disks start at (-0.5, 0) and (0.5, 0)

SweepingProblem moving_wall(double horizon) {
  SweepingProblem p;
  p.dimension = 1;
  p.horizon = horizon;
  p.initial = Eigen::VectorXd::Zero(1);
  Constraint wall;
  wall.value = [](double t, const Configuration& q) { return q[0] - t; };
  wall.gradient = [](double, const Configuration&) {
    return Eigen::VectorXd(Eigen::VectorXd::Ones(1));
  };
  wall.time_derivative = [](double, const Configuration&) { return -1.0; };
  wall.time_varying = true;
  p.constraints.push_back(std::move(wall));
  p.perturbation = [](double, const Configuration&) {
    return Eigen::VectorXd(Eigen::VectorXd::Zero(1));
  };
  return p;
}

SweepingProblem static_wall_push(double horizon) {
  SweepingProblem p;
  p.dimension = 1;
  p.horizon = horizon;
  p.initial = Eigen::VectorXd::Zero(1);
  Constraint wall;
  wall.value = [](double, const Configuration& q) { return q[0]; };
  wall.gradient = [](double, const Configuration&) {
    return Eigen::VectorXd(Eigen::VectorXd::Ones(1));
  };
  wall.time_varying = false;
  p.constraints.push_back(std::move(wall));
  p.perturbation = [](double, const Configuration&) {
    return Eigen::VectorXd(-Eigen::VectorXd::Ones(1));
  };
  return p;
}

SweepingProblem two_disk_headon(double horizon) {
  SweepingProblem p;
  p.dimension = 4;
  p.horizon = horizon;
  p.initial = Eigen::VectorXd::Zero(4);
  p.initial << -kDiskStart, 0.0, kDiskStart, 0.0;
  p.constraints.push_back(crowd::disk_constraint(0, 1, 2, kDiskRadius));
  p.perturbation = [](double, const Configuration&) {
    Eigen::VectorXd u(4);
    u << 1.0, 0.0, -1.0, 0.0;
    return u;
  };
  return p;
}

SweepingProblem halfplane_sweep(double horizon) {
  SweepingProblem p;
  p.dimension = 2;
  p.horizon = horizon;
  p.initial = Eigen::VectorXd::Zero(2);
  p.initial << 0.0, 0.3;
  Constraint wall;
  wall.value = [](double t, const Configuration& q) { return q[0] - t; };
  wall.gradient = [](double, const Configuration&) {
    return Eigen::VectorXd(Eigen::VectorXd::Unit(2, 0));
  };
  wall.time_derivative = [](double, const Configuration&) { return -1.0; };
  wall.time_varying = true;
  p.constraints.push_back(std::move(wall));
  p.perturbation = [](double, const Configuration&) {
    return Eigen::VectorXd(Eigen::VectorXd::Unit(2, 1));
  };
  return p;
}

}  // namespace

std::vector<std::string> names() {
  return {kMovingWall, kStaticWallPush, kTwoDiskHeadon, kHalfplaneSweep};
}

bool is_builtin(const std::string& name) {
  const auto all = names();
  return std::find(all.begin(), all.end(), name) != all.end();
}

SweepingProblem make(const std::string& name, double horizon) {
  const double T = horizon > 0.0 ? horizon : 1.0;
  if (name == kMovingWall) return moving_wall(T);
  if (name == kStaticWallPush) return static_wall_push(T);
  if (name == kTwoDiskHeadon) return two_disk_headon(T);
  if (name == kHalfplaneSweep) return halfplane_sweep(T);
  throw ConfigError("unknown builtin scenario: " + name);
}

Configuration exact_solution(const std::string& name, double t) {
  if (name == kMovingWall) {
    Eigen::VectorXd q(1);
    q << std::max(0.0, t);
    return q;
  }
  if (name == kStaticWallPush) {
    return Eigen::VectorXd::Zero(1);
  }
  if (name == kTwoDiskHeadon) {
    // Gap closes at rate 2 until contact at t* = (2 kDiskStart - 2 r) / 2.
    const double t_contact = kDiskStart - kDiskRadius;
    const double x = kDiskStart - std::min(t, t_contact);
    Eigen::VectorXd q(4);
    q << -x, 0.0, x, 0.0;
    return q;
  }
  if (name == kHalfplaneSweep) {
    Eigen::VectorXd q(2);
    q << std::max(0.0, t), 0.3 + t;
    return q;
  }
  throw ConfigError("unknown builtin scenario: " + name);
}

}  // namespace sweep::builtins
