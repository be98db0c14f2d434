#include "sweep/runner.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>

#include "sweep/builtins.hpp"
#include "sweep/log.hpp"
#include "sweep/projection.hpp"
#include "sweep/rng.hpp"

namespace sweep {

namespace {

// 17 significant digits round-trip doubles exactly.
void print_real(std::FILE* f, double v) { std::fprintf(f, "%.17g", v); }

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_for_write(const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw ConfigError("cannot open output file: " + path);
  return f;
}

void write_trajectory_csv(const std::string& path, const DiscreteTrajectory& traj) {
  FilePtr f = open_for_write(path);
  std::fprintf(f.get(), "t");
  for (int j = 0; j < traj.dimension(); ++j) std::fprintf(f.get(), ",q%d", j);
  std::fprintf(f.get(), "\n");
  for (int k = 0; k <= traj.n; ++k) {
    print_real(f.get(), traj.time_at(k));
    for (int j = 0; j < traj.dimension(); ++j) {
      std::fputc(',', f.get());
      print_real(f.get(), traj.nodes[static_cast<std::size_t>(k)][j]);
    }
    std::fputc('\n', f.get());
  }
}

void write_json(const std::string& path, const nlohmann::json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << doc.dump(2) << "\n";
}

double feasibility_margin(const SweepingProblem& problem,
                          const DiscreteTrajectory& traj) {
  if (problem.constraints.empty()) return 0.0;
  double margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= traj.n; ++k) {
    margin = std::min(margin,
                      min_constraint_value(problem, traj.time_at(k),
                                           traj.nodes[static_cast<std::size_t>(k)]));
  }
  return margin;
}

nlohmann::json trajectory_summary(const SweepingProblem& problem,
                                  const DiscreteTrajectory& traj) {
  double max_residual = 0.0;
  double max_prediction_gap = 0.0;
  long total_iterations = 0;
  double max_displacement = 0.0;
  for (const StepStats& s : traj.stats) {
    max_residual = std::max(max_residual, s.residual);
    max_prediction_gap = std::max(max_prediction_gap, s.prediction_gap);
    max_displacement = std::max(max_displacement, s.displacement);
    total_iterations += s.iterations;
  }
  return nlohmann::json{
      {"n", traj.n},
      {"h", traj.h},
      {"horizon", traj.horizon},
      {"dimension", traj.dimension()},
      {"feasibility_margin", feasibility_margin(problem, traj)},
      {"max_step_displacement", max_displacement},
      {"max_velocity", traj.max_velocity()},
      {"max_set_motion_rate", traj.max_set_motion_rate()},
      {"max_projection_residual", max_residual},
      {"max_prediction_gap", max_prediction_gap},
      {"total_projection_iterations", total_iterations},
  };
}

}  // namespace

SolveArtifacts run_solve(const RunConfig& config, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const SweepingProblem problem = build_problem(config);

  SolveArtifacts out;
  nlohmann::json runs = nlohmann::json::array();
  for (const int n : config.steps) {
    DiscreteTrajectory traj = solve(problem, n);
    const std::string name = config.steps.size() == 1
                                 ? std::string("trajectory.csv")
                                 : "trajectory_n" + std::to_string(n) + ".csv";
    const std::string path = out_dir + "/" + name;
    write_trajectory_csv(path, traj);
    SWEEP_INFO("solve n=%d wrote %s", n, path.c_str());
    runs.push_back(trajectory_summary(problem, traj));
    runs.back()["trajectory_file"] = name;
    out.trajectory_files.push_back(path);
    out.trajectories.push_back(std::move(traj));
  }

  nlohmann::json summary{{"seed", config.seed}, {"runs", runs}};
  out.summary_file = out_dir + "/summary.json";
  write_json(out.summary_file, summary);
  return out;
}

nlohmann::json to_json(const ConvergenceReport& report) {
  nlohmann::json points = nlohmann::json::array();
  nlohmann::json excluded = nlohmann::json::array();
  for (const ConvergencePoint& p : report.points) {
    points.push_back({{"h", p.h}, {"e_h", p.e_h}, {"included", p.included}});
    if (!p.included) {
      excluded.push_back({{"h", p.h}, {"reason", p.note}});
    }
  }
  nlohmann::json doc{{"points", points}, {"excluded", excluded}};
  if (report.exact) {
    doc["slope"] = "exact";
    doc["intercept"] = nullptr;
  } else {
    if (report.slope) doc["slope"] = *report.slope;
    else doc["slope"] = nullptr;
    if (report.intercept) doc["intercept"] = *report.intercept;
    else doc["intercept"] = nullptr;
  }
  return doc;
}

ConvergenceReport run_convergence(const RunConfig& config,
                                  const std::string& out_dir, int threads,
                                  int error_samples) {
  if (config.h_list.empty()) {
    throw ConfigError("convergence study needs a nonempty h_list");
  }
  if (!(config.h_min > 0.0)) {
    throw ConfigError("convergence study needs h_min");
  }
  for (const double h : config.h_list) {
    if (h <= config.h_min) {
      throw ConfigError("h_min must be strictly smaller than every h in h_list");
    }
  }
  if (error_samples < 1) throw ConfigError("error_samples must be >= 1");
  std::filesystem::create_directories(out_dir);

  const SweepingProblem problem = build_problem(config);
  const double T = problem.horizon;

  const auto steps_for = [&](double h) {
    const double ratio = T / h;
    const int n = static_cast<int>(std::llround(ratio));
    if (std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio)) {
      SWEEP_INFO("T/h = %.17g is not integral for h = %.17g; rounding to n = %d",
                 ratio, h, n);
    }
    return std::max(n, 1);
  };

  // Reference first: every error compares against it.
  const DiscreteTrajectory reference = solve(problem, steps_for(config.h_min));

  std::vector<double> sample_times;
  sample_times.reserve(static_cast<std::size_t>(error_samples));
  for (int i = 1; i <= error_samples; ++i) {
    sample_times.push_back(static_cast<double>(i) * T /
                           static_cast<double>(error_samples));
  }

  const int count = static_cast<int>(config.h_list.size());
  std::vector<double> errors(static_cast<std::size_t>(count), 0.0);
  const auto task = [&](int idx) {
    const DiscreteTrajectory traj = solve(problem, steps_for(config.h_list[idx]));
    errors[static_cast<std::size_t>(idx)] = sup_error(reference, traj, sample_times);
  };
  if (threads > 1) {
    std::vector<std::future<void>> inflight;
    for (int idx = 0; idx < count; ++idx) {
      if (static_cast<int>(inflight.size()) >= threads) {
        inflight.front().get();
        inflight.erase(inflight.begin());
      }
      inflight.push_back(std::async(std::launch::async, task, idx));
    }
    for (auto& f : inflight) f.get();
  } else {
    for (int idx = 0; idx < count; ++idx) task(idx);
  }

  ConvergenceReport report;
  const double cutoff = kFitExclusionFactor * config.h_min;
  for (int idx = 0; idx < count; ++idx) {
    ConvergencePoint p;
    p.h = config.h_list[static_cast<std::size_t>(idx)];
    p.e_h = errors[static_cast<std::size_t>(idx)];
    if (p.e_h <= kExactErrorFloor) {
      // Pure roundoff: the scheme reproduced the reference trajectory and a
      // log fit on noise would be meaningless.
      p.note = "exact";
    } else if (p.h < cutoff) {
      p.note = "h within factor " + std::to_string(kFitExclusionFactor) +
               " of h_min";
    } else {
      p.included = true;
    }
    report.points.push_back(std::move(p));
  }

  int included = 0;
  int exact_points = 0;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const ConvergencePoint& p : report.points) {
    if (p.note == "exact") ++exact_points;
    if (!p.included) continue;
    ++included;
    const double x = std::log(p.h);
    const double y = std::log(p.e_h);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  report.exact = exact_points == count;
  if (included >= 3) {
    const double denom = included * sxx - sx * sx;
    report.slope = (included * sxy - sx * sy) / denom;
    report.intercept = (sy - *report.slope * sx) / included;
  }

  report.csv_file = out_dir + "/convergence.csv";
  {
    FilePtr f = open_for_write(report.csv_file);
    std::fprintf(f.get(), "h,e_h,included_in_fit\n");
    for (const ConvergencePoint& p : report.points) {
      print_real(f.get(), p.h);
      std::fputc(',', f.get());
      print_real(f.get(), p.e_h);
      std::fprintf(f.get(), ",%d\n", p.included ? 1 : 0);
    }
  }
  report.report_file = out_dir + "/convergence.json";
  write_json(report.report_file, to_json(report));
  if (report.slope) {
    SWEEP_INFO("convergence study: slope %.4f over %d points", *report.slope,
               included);
  }
  return report;
}

namespace {

// Anchor states for diagnostics sampling: the initial configuration plus a
// few evolved nodes, so contact-rich geometry gets probed too.
std::vector<DiagnosticAnchor> diagnostic_anchors(const SweepingProblem& problem,
                                                 const RunConfig& config) {
  std::vector<DiagnosticAnchor> anchors;
  anchors.push_back({0.0, problem.initial});
  const int n = std::min(config.steps.front(), 200);
  try {
    const DiscreteTrajectory traj = solve(problem, n);
    for (const int k : {n / 4, n / 2, 3 * n / 4, n}) {
      if (k > 0) anchors.push_back({traj.time_at(k), traj.nodes[static_cast<std::size_t>(k)]});
    }
  } catch (const SolverError&) {
    // Diagnostics still run on the initial state if the solve fails.
  }
  return anchors;
}

// Perturbs the anchor into a nearby strictly feasible point, or returns the
// anchor itself if rejection fails.
Configuration feasible_near(const SweepingProblem& problem, double t,
                            const Configuration& q, double radius, Rng& rng) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    const Configuration candidate =
        q + rng.in_ball(static_cast<int>(q.size()), radius);
    if (is_feasible(problem, t, candidate)) return candidate;
  }
  return q;
}

}  // namespace

DiagnosticsReport check_scenario(const SweepingProblem& problem,
                                 AssumptionParams params,
                                 bool use_gamma_estimate,
                                 const std::vector<DiagnosticAnchor>& anchors,
                                 std::uint64_t seed, int quadratic_samples,
                                 int qualification_samples,
                                 double sample_radius) {
  DiagnosticsReport report;
  report.seed = seed;

  // gamma lower bound over the anchor states.
  double gamma_estimate = 1.0;
  for (std::size_t a = 0; a < anchors.size(); ++a) {
    try {
      gamma_estimate = std::max(
          gamma_estimate,
          estimate_gamma(problem, anchors[a].t, anchors[a].q, params.rho, 200,
                         derive_seed(seed, 0x67616d6d61ULL + a)));
    } catch (const DegenerateGradientsError&) {
      report.degenerate_gradients = true;
    }
  }
  report.gamma_estimate = gamma_estimate;
  if (use_gamma_estimate) params.gamma = std::max(1.0, gamma_estimate);

  const DerivedConstants dc = derived_constants(params);
  report.eta = dc.eta;
  report.theta = dc.theta;
  report.r_qual = dc.r_qual;

  // Curvature bound sampling: feasible pairs near the anchors.
  double grad_min = std::numeric_limits<double>::infinity();
  double grad_max = 0.0;
  int used = 0;
  for (int s = 0; s < quadratic_samples; ++s) {
    Rng rng(derive_seed(seed, 0x71756164ULL + static_cast<std::uint64_t>(s)));
    const DiagnosticAnchor& anchor = anchors[static_cast<std::size_t>(s) % anchors.size()];
    const Configuration q =
        feasible_near(problem, anchor.t, anchor.q, sample_radius, rng);
    const Configuration q_tilde =
        feasible_near(problem, anchor.t, q, sample_radius, rng);
    for (const bool ok :
         check_quadratic_distance(problem, params, anchor.t, q_tilde, q)) {
      if (!ok) ++report.quadratic_bound_violations;
    }
    for (const Constraint& c : problem.constraints) {
      const double norm = c.gradient(anchor.t, q).norm();
      grad_min = std::min(grad_min, norm);
      grad_max = std::max(grad_max, norm);
    }
    ++used;
  }
  report.gradient_norm_min = std::isfinite(grad_min) ? grad_min : 0.0;
  report.gradient_norm_max = grad_max;

  // Metric qualification sampling around each anchor.
  const int per_anchor =
      std::max(1, qualification_samples / static_cast<int>(anchors.size()));
  for (std::size_t a = 0; a < anchors.size(); ++a) {
    const QualificationCheck qc = check_metric_qualification(
        problem, params, anchors[a].t, anchors[a].q, per_anchor,
        derive_seed(seed, 0x7175616cULL + a));
    report.qualification_violations += qc.violations;
    used += qc.samples_checked;
  }
  report.samples_used = used;
  return report;
}

DiagnosticsReport run_check(const RunConfig& config, const std::string& out_dir,
                            int quadratic_samples, int qualification_samples) {
  std::filesystem::create_directories(out_dir);
  const SweepingProblem problem = build_problem(config);

  AssumptionParams params;
  double sample_radius = 0.1;
  if (config.params) {
    params = *config.params;
  } else if (config.scenario.kind == ScenarioConfig::Kind::crowd) {
    params = crowd::scenario_derived_params(config.scenario.crowd);
  }
  if (config.scenario.kind == ScenarioConfig::Kind::crowd) {
    // Keeps the sampled segments where the scenario curvature bound holds.
    sample_radius = 0.15 * config.scenario.crowd.radius;
  }

  DiagnosticsReport report = check_scenario(
      problem, params, /*use_gamma_estimate=*/!config.gamma_given,
      diagnostic_anchors(problem, config), config.seed, quadratic_samples,
      qualification_samples, sample_radius);

  write_json(out_dir + "/diagnostics.json", to_json(report));
  SWEEP_INFO("diagnostics: gamma>=%.4f, %d quadratic and %d qualification violations",
             report.gamma_estimate, report.quadratic_bound_violations,
             report.qualification_violations);
  return report;
}

}  // namespace sweep
