#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "sweep/problem.hpp"

namespace sweep::crowd {

/// Room evacuation scenario: `count` rigid disks of radius `radius` in an
/// axis-aligned room, all seeking `exit_center` on the wall at
/// `desired_speed`. The exit wall carries no wall constraint; instead two
/// door-jamb obstacles of radius `jamb_radius`, placed `door_width` apart
/// around the exit, keep the opening convex constraint by constraint.
struct CrowdScenario {
  int count = 1;
  double radius = 0.2;
  double room_width = 10.0;
  double room_height = 10.0;
  Eigen::Vector2d exit_center{10.0, 5.0};
  double jamb_radius = 0.1;
  double door_width = 1.0;  // distance between the jamb centers
  double desired_speed = 1.0;
  std::uint64_t seed = 1;
};

/// Throws unless the exit lies on exactly one wall segment.
void validate_scenario(const CrowdScenario& scenario);

/// Non-overlap constraint |q_i - q_j| - 2 r >= 0 for one pair, as a
/// constraint over the stacked 2N-dimensional configuration. The gradient is
/// the unit center-to-center direction in block i and its negative in block
/// j (full-vector norm sqrt(2)); it throws CoincidentCentersError when the
/// centers collapse onto each other.
Constraint disk_constraint(int i, int j, int count, double radius);

/// One linear constraint per disk and non-exit wall keeping the center a
/// radius away from the wall line, plus the two jamb obstacles per disk for
/// the exit wall.
std::vector<Constraint> wall_constraints(const CrowdScenario& scenario);

/// Exit-seeking field: unit direction toward the exit scaled by the desired
/// speed, the outward wall normal once a disk has passed the door plane, and
/// zero exactly at the exit point.
Eigen::VectorXd spontaneous_velocity(const CrowdScenario& scenario,
                                     const Configuration& q);

struct BuildOptions {
  /// Omit pair constraints that one step cannot possibly activate (distance
  /// beyond 2r + 2 * speed * h + safety) from the per-step polyhedron. The
  /// stepper re-solves with every constraint if the post-step feasibility
  /// guard ever trips. Off by default.
  bool prune_pairs = false;
  double prune_safety = 0.0;  // extra margin; defaults to 2 * radius when 0
};

/// Assembles the scenario as a sweeping problem: all N(N-1)/2 pair
/// constraints, wall and jamb constraints, the exit-seeking perturbation and
/// a seeded initial placement.
SweepingProblem build(const CrowdScenario& scenario, const BuildOptions& options = {});

/// Same, with a caller-supplied initial configuration.
SweepingProblem build_with_initial(const CrowdScenario& scenario,
                                   const Configuration& initial,
                                   const BuildOptions& options = {});

/// Seeded rejection sampling of non-overlapping disk centers, strictly
/// feasible with margin 0.01 r. Deterministic per seed; throws
/// PlacementFailureError after 10^6 rejected draws.
Configuration place_initial(const CrowdScenario& scenario);

/// Assumption constants derived from the scenario geometry: alpha = beta =
/// sqrt(2) (the pair-gradient norm), curvature bound M = 2 / radius (valid
/// while center separations stay above the radius, which the diagnostic
/// samplers guarantee), rho = radius / 2. gamma is left at 1 and should be
/// replaced by estimate_gamma on the states of interest.
AssumptionParams scenario_derived_params(const CrowdScenario& scenario);

}  // namespace sweep::crowd
