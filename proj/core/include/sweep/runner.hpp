#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sweep/config.hpp"
#include "sweep/diagnostics.hpp"
#include "sweep/stepper.hpp"

namespace sweep {

/// Files written by run_solve, one trajectory per configured step count.
struct SolveArtifacts {
  std::vector<std::string> trajectory_files;
  std::string summary_file;
  std::vector<DiscreteTrajectory> trajectories;
};

/// Runs the configured scenario and writes trajectory CSVs ("t,q0,...";
/// 17 significant digits, round-trip exact) plus a summary JSON with the
/// feasibility margin and projection statistics.
SolveArtifacts run_solve(const RunConfig& config, const std::string& out_dir);

struct ConvergencePoint {
  double h = 0.0;
  double e_h = 0.0;
  bool included = false;
  std::string note;  // why a point was excluded from the fit
};

/// Log-log error study against the h_min reference.
struct ConvergenceReport {
  std::vector<ConvergencePoint> points;
  std::optional<double> slope;
  std::optional<double> intercept;
  bool exact = false;  // every error vanished (analytic scenarios)
  std::string csv_file;
  std::string report_file;
};

nlohmann::json to_json(const ConvergenceReport& report);

/// Reference solve at h_min, one solve per h, errors sampled at
/// t_i = i T / error_samples, ordinary least squares on (log h, log e_h).
/// Points with h < 4 h_min are excluded from the fit (the error proxy is not
/// valid next to the reference step); zero errors are excluded as "exact".
/// Per-h solves run in parallel when threads > 1; outputs do not depend on
/// the thread count.
ConvergenceReport run_convergence(const RunConfig& config,
                                  const std::string& out_dir, int threads = 1,
                                  int error_samples = 10);

/// Assumption diagnostics for the configured scenario: derived constants,
/// a sampled gamma lower bound, and violation counts for the curvature and
/// metric qualification inequalities. Writes the report JSON.
DiagnosticsReport run_check(const RunConfig& config, const std::string& out_dir,
                            int quadratic_samples = 1000,
                            int qualification_samples = 1000);

/// Exclusion factor for the slope fit: h closer than this multiple of h_min
/// is dropped.
inline constexpr double kFitExclusionFactor = 4.0;

/// Errors at or below this are roundoff, reported as "exact" and kept out of
/// the fit.
inline constexpr double kExactErrorFloor = 1e-13;

/// A state the diagnostics sample around.
struct DiagnosticAnchor {
  double t = 0.0;
  Configuration q;
};

/// Diagnostics core behind run_check, exposed so callers can probe
/// hand-built states: gamma estimation (kept at params.gamma when
/// use_gamma_estimate is false), curvature-bound sampling within
/// sample_radius of the anchors and qualification sampling. A
/// DegenerateGradientsError raised by any anchor is recorded in the report
/// rather than thrown.
DiagnosticsReport check_scenario(const SweepingProblem& problem,
                                 AssumptionParams params,
                                 bool use_gamma_estimate,
                                 const std::vector<DiagnosticAnchor>& anchors,
                                 std::uint64_t seed, int quadratic_samples,
                                 int qualification_samples,
                                 double sample_radius);

}  // namespace sweep
