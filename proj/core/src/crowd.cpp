#include "sweep/crowd.hpp"

#include <array>
#include <cmath>
#include <string>

#include "sweep/rng.hpp"

namespace sweep::crowd {

namespace {

enum class Wall { left, right, bottom, top };

constexpr std::array<Wall, 4> kWalls = {Wall::left, Wall::right, Wall::bottom,
                                        Wall::top};

Wall exit_wall(const CrowdScenario& sc) {
  const double x = sc.exit_center.x();
  const double y = sc.exit_center.y();
  const double tol = 1e-9 * std::max(sc.room_width, sc.room_height);
  const bool on_x_range = x >= -tol && x <= sc.room_width + tol;
  const bool on_y_range = y >= -tol && y <= sc.room_height + tol;
  int hits = 0;
  Wall which = Wall::right;
  if (std::abs(x) <= tol && on_y_range) { which = Wall::left; ++hits; }
  if (std::abs(x - sc.room_width) <= tol && on_y_range) { which = Wall::right; ++hits; }
  if (std::abs(y) <= tol && on_x_range) { which = Wall::bottom; ++hits; }
  if (std::abs(y - sc.room_height) <= tol && on_x_range) { which = Wall::top; ++hits; }
  if (hits != 1) {
    throw OutOfRangeError("exit_center must lie on exactly one wall segment");
  }
  return which;
}

Eigen::Vector2d wall_tangent(Wall w) {
  switch (w) {
    case Wall::left:
    case Wall::right:
      return {0.0, 1.0};
    default:
      return {1.0, 0.0};
  }
}

Eigen::Vector2d wall_outward(Wall w) {
  switch (w) {
    case Wall::left: return {-1.0, 0.0};
    case Wall::right: return {1.0, 0.0};
    case Wall::bottom: return {0.0, -1.0};
    default: return {0.0, 1.0};
  }
}

std::array<Eigen::Vector2d, 2> jamb_centers(const CrowdScenario& sc) {
  const Eigen::Vector2d t = wall_tangent(exit_wall(sc));
  const double half = 0.5 * sc.door_width;
  return {sc.exit_center - half * t, sc.exit_center + half * t};
}

// Linear wall constraint for one disk: signed distance of the center to the
// wall line minus the disk radius.
Constraint wall_constraint(Wall w, int disk, const CrowdScenario& sc) {
  const int xi = 2 * disk;
  const int yi = 2 * disk + 1;
  const double r = sc.radius;
  const double width = sc.room_width;
  const double height = sc.room_height;
  const int d = 2 * sc.count;
  Constraint c;
  c.time_varying = false;
  switch (w) {
    case Wall::left:
      c.value = [xi, r](double, const Configuration& q) { return q[xi] - r; };
      c.gradient = [xi, d](double, const Configuration&) {
        return Eigen::VectorXd(Eigen::VectorXd::Unit(d, xi));
      };
      break;
    case Wall::right:
      c.value = [xi, r, width](double, const Configuration& q) {
        return width - q[xi] - r;
      };
      c.gradient = [xi, d](double, const Configuration&) {
        return Eigen::VectorXd(-Eigen::VectorXd::Unit(d, xi));
      };
      break;
    case Wall::bottom:
      c.value = [yi, r](double, const Configuration& q) { return q[yi] - r; };
      c.gradient = [yi, d](double, const Configuration&) {
        return Eigen::VectorXd(Eigen::VectorXd::Unit(d, yi));
      };
      break;
    case Wall::top:
      c.value = [yi, r, height](double, const Configuration& q) {
        return height - q[yi] - r;
      };
      c.gradient = [yi, d](double, const Configuration&) {
        return Eigen::VectorXd(-Eigen::VectorXd::Unit(d, yi));
      };
      break;
  }
  return c;
}

// Keeps disk `disk` outside the inflated jamb obstacle at `center`.
Constraint jamb_constraint(int disk, const Eigen::Vector2d& center,
                           const CrowdScenario& sc) {
  const int d = 2 * sc.count;
  const double keepout = sc.radius + sc.jamb_radius;
  Constraint c;
  c.time_varying = false;
  c.value = [disk, center, keepout](double, const Configuration& q) {
    return (Eigen::Vector2d(q.segment<2>(2 * disk)) - center).norm() - keepout;
  };
  c.gradient = [disk, center, d](double, const Configuration& q) {
    const Eigen::Vector2d diff = Eigen::Vector2d(q.segment<2>(2 * disk)) - center;
    const double n = diff.norm();
    if (n < tol::grad_floor) {
      throw CoincidentCentersError(disk, -1,
                                   "disk " + std::to_string(disk) +
                                       " sits on a jamb center");
    }
    Eigen::VectorXd g = Eigen::VectorXd::Zero(d);
    g.segment<2>(2 * disk) = diff / n;
    return g;
  };
  return c;
}

}  // namespace

void validate_scenario(const CrowdScenario& sc) {
  if (sc.count < 1) throw OutOfRangeError("scenario needs at least one disk");
  if (!(sc.radius > 0.0)) throw OutOfRangeError("disk radius must be positive");
  if (!(sc.room_width > 0.0) || !(sc.room_height > 0.0)) {
    throw OutOfRangeError("room dimensions must be positive");
  }
  if (!(sc.desired_speed > 0.0)) {
    throw OutOfRangeError("desired speed must be positive");
  }
  if (sc.jamb_radius < 0.0 || sc.door_width < 0.0) {
    throw OutOfRangeError("door geometry must be nonnegative");
  }
  exit_wall(sc);  // throws unless on exactly one wall
}

Constraint disk_constraint(int i, int j, int count, double radius) {
  if (!(0 <= i && i < j && j < count)) {
    throw OutOfRangeError("disk pair indices must satisfy 0 <= i < j < count");
  }
  const int d = 2 * count;
  Constraint c;
  c.time_varying = false;
  c.value = [i, j, radius](double, const Configuration& q) {
    return (Eigen::Vector2d(q.segment<2>(2 * i)) -
            Eigen::Vector2d(q.segment<2>(2 * j)))
               .norm() -
           2.0 * radius;
  };
  c.gradient = [i, j, d](double, const Configuration& q) {
    const Eigen::Vector2d diff = Eigen::Vector2d(q.segment<2>(2 * i)) -
                                 Eigen::Vector2d(q.segment<2>(2 * j));
    const double n = diff.norm();
    if (n < tol::grad_floor) {
      throw CoincidentCentersError(i, j,
                                   "disks " + std::to_string(i) + " and " +
                                       std::to_string(j) + " have coincident centers");
    }
    const Eigen::Vector2d e = diff / n;
    Eigen::VectorXd g = Eigen::VectorXd::Zero(d);
    g.segment<2>(2 * i) = e;
    g.segment<2>(2 * j) = -e;
    return g;
  };
  return c;
}

std::vector<Constraint> wall_constraints(const CrowdScenario& sc) {
  validate_scenario(sc);
  const Wall exit = exit_wall(sc);
  std::vector<Constraint> out;
  out.reserve(static_cast<std::size_t>(sc.count) * 5);
  for (const Wall w : kWalls) {
    if (w == exit) continue;
    for (int i = 0; i < sc.count; ++i) out.push_back(wall_constraint(w, i, sc));
  }
  for (const Eigen::Vector2d& center : jamb_centers(sc)) {
    for (int i = 0; i < sc.count; ++i) out.push_back(jamb_constraint(i, center, sc));
  }
  return out;
}

Eigen::VectorXd spontaneous_velocity(const CrowdScenario& sc,
                                     const Configuration& q) {
  const Eigen::Vector2d outward = wall_outward(exit_wall(sc));
  Eigen::VectorXd u = Eigen::VectorXd::Zero(2 * sc.count);
  for (int i = 0; i < sc.count; ++i) {
    const Eigen::Vector2d pos = q.segment<2>(2 * i);
    if ((pos - sc.exit_center).dot(outward) > 0.0) {
      // Past the door plane: keep going straight out.
      u.segment<2>(2 * i) = sc.desired_speed * outward;
      continue;
    }
    const Eigen::Vector2d to_exit = sc.exit_center - pos;
    const double dist = to_exit.norm();
    if (dist < tol::grad_floor) continue;  // standing on the exit point
    u.segment<2>(2 * i) = sc.desired_speed / dist * to_exit;
  }
  return u;
}

Configuration place_initial(const CrowdScenario& sc) {
  validate_scenario(sc);
  const double margin = 0.01 * sc.radius;
  const double lo_x = sc.radius + margin;
  const double hi_x = sc.room_width - sc.radius - margin;
  const double lo_y = sc.radius + margin;
  const double hi_y = sc.room_height - sc.radius - margin;
  if (lo_x >= hi_x || lo_y >= hi_y) {
    throw PlacementFailureError("room too small for the disk radius");
  }
  const auto jambs = jamb_centers(sc);
  const double jamb_clearance = sc.radius + sc.jamb_radius + margin;
  const double pair_clearance = 2.0 * sc.radius + margin;

  Rng rng(sc.seed);
  std::vector<Eigen::Vector2d> accepted;
  accepted.reserve(static_cast<std::size_t>(sc.count));
  long rejected = 0;
  while (static_cast<int>(accepted.size()) < sc.count) {
    const Eigen::Vector2d candidate{rng.uniform(lo_x, hi_x), rng.uniform(lo_y, hi_y)};
    bool ok = (candidate - jambs[0]).norm() >= jamb_clearance &&
              (candidate - jambs[1]).norm() >= jamb_clearance;
    for (std::size_t k = 0; ok && k < accepted.size(); ++k) {
      ok = (candidate - accepted[k]).norm() >= pair_clearance;
    }
    if (ok) {
      accepted.push_back(candidate);
    } else if (++rejected >= 1000000) {
      throw PlacementFailureError("placement did not terminate after 10^6 rejections");
    }
  }

  Configuration q(2 * sc.count);
  for (int i = 0; i < sc.count; ++i) q.segment<2>(2 * i) = accepted[i];
  return q;
}

SweepingProblem build_with_initial(const CrowdScenario& sc,
                                   const Configuration& initial,
                                   const BuildOptions& options) {
  validate_scenario(sc);
  SweepingProblem problem;
  problem.dimension = 2 * sc.count;
  problem.horizon = 1.0;  // callers override; kept positive for validation
  problem.initial = initial;

  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(sc.count) * (sc.count - 1) / 2);
  for (int i = 0; i < sc.count; ++i) {
    for (int j = i + 1; j < sc.count; ++j) {
      problem.constraints.push_back(disk_constraint(i, j, sc.count, sc.radius));
      pairs.emplace_back(i, j);
    }
  }
  for (Constraint& c : wall_constraints(sc)) {
    problem.constraints.push_back(std::move(c));
  }

  const CrowdScenario scenario = sc;
  problem.perturbation = [scenario](double, const Configuration& q) {
    return spontaneous_velocity(scenario, q);
  };

  if (options.prune_pairs) {
    const double safety =
        options.prune_safety > 0.0 ? options.prune_safety : 2.0 * sc.radius;
    const int pair_count = static_cast<int>(pairs.size());
    const int total = static_cast<int>(problem.constraints.size());
    const double reach_base = 2.0 * sc.radius + safety;
    const double speed = sc.desired_speed;
    problem.candidate_filter = [pairs, pair_count, total, reach_base, speed](
                                   double, const Configuration& q, double h) {
      const double reach = reach_base + 2.0 * speed * h;
      std::vector<int> keep;
      keep.reserve(static_cast<std::size_t>(pair_count) / 4 + 64);
      for (int k = 0; k < pair_count; ++k) {
        const auto [i, j] = pairs[k];
        const Eigen::Vector2d diff = Eigen::Vector2d(q.segment<2>(2 * i)) -
                                     Eigen::Vector2d(q.segment<2>(2 * j));
        if (diff.norm() <= reach) keep.push_back(k);
      }
      for (int k = pair_count; k < total; ++k) keep.push_back(k);
      return keep;
    };
  }
  return problem;
}

SweepingProblem build(const CrowdScenario& sc, const BuildOptions& options) {
  return build_with_initial(sc, place_initial(sc), options);
}

AssumptionParams scenario_derived_params(const CrowdScenario& sc) {
  AssumptionParams p;
  p.alpha = std::sqrt(2.0);
  p.beta = std::sqrt(2.0);
  p.m_bound = 2.0 / sc.radius;
  p.rho = sc.radius / 2.0;
  p.gamma = 1.0;
  p.c_margin = sc.radius / 2.0;
  p.k_lip = 1.0;
  return p;
}

}  // namespace sweep::crowd
