#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "sweep/runner.hpp"

using namespace sweep;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

nlohmann::json slurp_json(const std::string& path) {
  return nlohmann::json::parse(slurp(path));
}

}  // namespace

TEST_CASE("parse_config: defaults, full round trip, strictness") {
  const auto cfg = parse_config(nlohmann::json::parse(R"({
    "scenario": {"type": "crowd", "count": 20, "radius": 0.2,
                 "room_width": 10, "room_height": 10,
                 "exit_center": [10, 5], "desired_speed": 1.0},
    "horizon": 4.0, "steps": 100, "h_min": 0.01,
    "h_list": [0.02, 0.05, 0.1],
    "params": {"alpha": 1.5, "beta": 2.0, "gamma": 1.25},
    "output_dir": "/tmp/x", "seed": 42
  })"));
  CHECK(cfg.scenario.kind == ScenarioConfig::Kind::crowd);
  CHECK(cfg.scenario.crowd.count == 20);
  CHECK(cfg.horizon == 4.0);
  CHECK(cfg.steps == std::vector<int>{100});
  CHECK(cfg.h_list.size() == 3);
  CHECK(cfg.params.has_value());
  CHECK(cfg.gamma_given);
  CHECK(cfg.params->alpha == 1.5);
  CHECK(cfg.seed == 42);

  CHECK_THROWS_AS(parse_config(nlohmann::json::parse(R"({"unknown_key": 1})")),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(nlohmann::json::parse(
                      R"({"scenario": {"type": "crowd", "velocity": 3}})")),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(nlohmann::json::parse(
                      R"({"scenario": "builtin:not-a-case"})")),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(nlohmann::json::parse(R"({"steps": 0})")),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(nlohmann::json::parse(R"({"horizon": -1})")),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(nlohmann::json::parse(
                      R"({"params": {"alpha": 2, "beta": 1}})")),
                  ConfigError);
}

TEST_CASE("parse_config: scenario string form and steps list") {
  const auto cfg = parse_config(nlohmann::json::parse(
      R"({"scenario": "builtin:static-wall-push-1d", "steps": [10, 20]})"));
  CHECK(cfg.scenario.kind == ScenarioConfig::Kind::builtin);
  CHECK(cfg.scenario.builtin_name == "static-wall-push-1d");
  CHECK(cfg.steps == std::vector<int>{10, 20});
}

TEST_CASE("run_solve: moving wall nodes equal the grid times") {
  RunConfig cfg;
  cfg.scenario.kind = ScenarioConfig::Kind::builtin;
  cfg.scenario.builtin_name = "moving-wall-1d";
  cfg.steps = {100};
  const std::string dir = testing::temp_dir("solve_wall");
  const SolveArtifacts art = run_solve(cfg, dir);
  REQUIRE(art.trajectory_files.size() == 1);

  // CSV parses back to the exact doubles (17 significant digits).
  std::ifstream in(art.trajectory_files[0]);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,q0");
  int k = 0;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    const double t = std::strtod(line.substr(0, comma).c_str(), nullptr);
    const double q = std::strtod(line.substr(comma + 1).c_str(), nullptr);
    CHECK(t == art.trajectories[0].time_at(k));
    CHECK(q == art.trajectories[0].nodes[k][0]);
    CHECK(std::abs(q - t) <= 1e-12);
    ++k;
  }
  CHECK(k == 101);

  const nlohmann::json summary = slurp_json(art.summary_file);
  CHECK(summary["runs"][0]["feasibility_margin"].get<double>() >= -tol::feas);
  CHECK(summary["runs"][0]["n"] == 100);
}

TEST_CASE("run_solve: unconstrained scenario is explicit Euler") {
  RunConfig cfg;
  cfg.scenario.kind = ScenarioConfig::Kind::crowd;
  cfg.scenario.crowd.count = 1;
  cfg.scenario.crowd.room_width = 100.0;
  cfg.scenario.crowd.room_height = 100.0;
  cfg.scenario.crowd.exit_center = {100.0, 50.0};
  cfg.horizon = 1.0;
  cfg.steps = {10};
  cfg.seed = 5;
  const std::string dir = testing::temp_dir("solve_euler");
  const SolveArtifacts art = run_solve(cfg, dir);
  const DiscreteTrajectory& traj = art.trajectories[0];
  // Far from walls and door: straight-line motion at the desired speed.
  const Eigen::VectorXd start = traj.nodes[0];
  const Eigen::VectorXd u =
      crowd::spontaneous_velocity(cfg.scenario.crowd, start);
  for (int k = 1; k <= 10; ++k) {
    const Eigen::VectorXd euler = traj.nodes[k - 1] +
                                  traj.h * crowd::spontaneous_velocity(
                                               cfg.scenario.crowd, traj.nodes[k - 1]);
    CHECK((traj.nodes[k] - euler).norm() <= 1e-12);
  }
  CHECK(u.norm() == doctest::Approx(1.0));
}

TEST_CASE("run_solve: byte-identical outputs for identical config and seed") {
  RunConfig cfg;
  cfg.scenario.kind = ScenarioConfig::Kind::crowd;
  cfg.scenario.crowd.count = 5;
  cfg.horizon = 0.5;
  cfg.steps = {25};
  cfg.seed = 31337;
  const std::string dir_a = testing::temp_dir("det_a");
  const std::string dir_b = testing::temp_dir("det_b");
  const SolveArtifacts a = run_solve(cfg, dir_a);
  const SolveArtifacts b = run_solve(cfg, dir_b);
  CHECK(slurp(a.trajectory_files[0]) == slurp(b.trajectory_files[0]));

  RunConfig other = cfg;
  other.seed = 31338;
  const std::string dir_c = testing::temp_dir("det_c");
  const SolveArtifacts c = run_solve(other, dir_c);
  CHECK(slurp(a.trajectory_files[0]) != slurp(c.trajectory_files[0]));
}

TEST_CASE("run_convergence: analytic scenario reports the exact sentinel") {
  RunConfig cfg;
  cfg.scenario.kind = ScenarioConfig::Kind::builtin;
  cfg.scenario.builtin_name = "moving-wall-1d";
  cfg.h_min = 0.01;
  cfg.h_list = {0.02, 0.04, 0.05, 0.1, 0.2, 0.5};
  const std::string dir = testing::temp_dir("conv_exact");
  const ConvergenceReport report = run_convergence(cfg, dir, 1);
  CHECK(report.exact);
  CHECK(!report.slope.has_value());
  for (const ConvergencePoint& p : report.points) {
    CHECK(p.e_h <= kExactErrorFloor);
    CHECK(!p.included);
    CHECK(p.note == "exact");
  }
  const nlohmann::json doc = slurp_json(report.report_file);
  CHECK(doc["slope"] == "exact");

  const std::string csv = slurp(report.csv_file);
  CHECK(csv.rfind("h,e_h,included_in_fit\n", 0) == 0);
}

TEST_CASE("run_convergence: contact-rich study fits a positive order") {
  // Two disks collide on their way to the door; the collision makes the
  // error genuinely h-dependent, so the fitted order must be positive and
  // plausible.
  RunConfig cfg;
  cfg.scenario.kind = ScenarioConfig::Kind::crowd;
  cfg.scenario.crowd.count = 2;
  cfg.scenario.crowd.room_width = 4.0;
  cfg.scenario.crowd.room_height = 4.0;
  cfg.scenario.crowd.exit_center = {4.0, 2.0};
  cfg.horizon = 2.0;
  cfg.h_min = 0.01;
  cfg.h_list = {0.04, 0.05, 0.08, 0.1, 0.2, 0.25, 0.5};
  cfg.seed = 12;
  const std::string dir = testing::temp_dir("conv_contact");
  const ConvergenceReport report = run_convergence(cfg, dir, 2);
  REQUIRE(report.slope.has_value());
  CHECK(*report.slope >= 0.2);
  CHECK(*report.slope <= 2.0);
}

TEST_CASE("run_convergence: exclusion of h close to h_min") {
  RunConfig cfg;
  cfg.scenario.kind = ScenarioConfig::Kind::crowd;
  cfg.scenario.crowd.count = 2;
  cfg.horizon = 1.0;
  cfg.h_min = 0.01;
  cfg.h_list = {0.02, 0.025, 0.04, 0.05, 0.1, 0.2};
  cfg.seed = 4;
  const std::string dir = testing::temp_dir("conv_excl");
  const ConvergenceReport report = run_convergence(cfg, dir, 1);
  for (const ConvergencePoint& p : report.points) {
    if (p.h < 0.04) {
      CHECK(!p.included);
    }
  }
  const nlohmann::json doc = slurp_json(report.report_file);
  CHECK(doc.contains("slope"));
  CHECK(doc.contains("intercept"));
  CHECK(doc.contains("points"));
  CHECK(doc.contains("excluded"));
}

TEST_CASE("run_convergence: configuration errors") {
  RunConfig cfg;
  cfg.scenario.kind = ScenarioConfig::Kind::builtin;
  cfg.scenario.builtin_name = "moving-wall-1d";
  const std::string dir = testing::temp_dir("conv_bad");
  CHECK_THROWS_AS(run_convergence(cfg, dir, 1), ConfigError);  // no h_list
  cfg.h_list = {0.02};
  CHECK_THROWS_AS(run_convergence(cfg, dir, 1), ConfigError);  // no h_min
  cfg.h_min = 0.05;
  CHECK_THROWS_AS(run_convergence(cfg, dir, 1), ConfigError);  // h <= h_min
}

TEST_CASE("run_check: crowd scenario yields clean diagnostics") {
  RunConfig cfg;
  cfg.scenario.kind = ScenarioConfig::Kind::crowd;
  cfg.scenario.crowd.count = 3;
  cfg.horizon = 1.0;
  cfg.steps = {50};
  cfg.seed = 2024;
  const std::string dir = testing::temp_dir("check_crowd");
  const DiagnosticsReport report = run_check(cfg, dir, 100, 100);
  CHECK(report.eta > 0.0);
  CHECK(report.theta >= 2.0);
  CHECK(report.r_qual > 0.0);
  CHECK(report.gamma_estimate >= 1.0);
  CHECK(report.quadratic_bound_violations == 0);
  CHECK(report.qualification_violations == 0);
  CHECK(report.samples_used > 0);
  CHECK_FALSE(report.degenerate_gradients);
  CHECK(report.gradient_norm_max <= std::sqrt(2.0) + 1e-12);
  CHECK(report.gradient_norm_min >= 1.0 - 1e-12);

  const nlohmann::json doc = slurp_json(dir + "/diagnostics.json");
  CHECK(doc["eta"] == report.eta);
}

TEST_CASE("run_check: gamma = 1 params give theta = 2 beta / alpha") {
  RunConfig cfg;
  cfg.scenario.kind = ScenarioConfig::Kind::builtin;
  cfg.scenario.builtin_name = "static-wall-push-1d";
  AssumptionParams params;
  params.alpha = 1.0;
  params.beta = 3.0;
  params.gamma = 1.0;
  cfg.params = params;
  cfg.gamma_given = true;
  const std::string dir = testing::temp_dir("check_theta");
  const DiagnosticsReport report = run_check(cfg, dir, 50, 50);
  CHECK(report.theta == doctest::Approx(6.0));
}

TEST_CASE("check_scenario: squeezed door disk surfaces degenerate gradients") {
  // Door gap exactly two disk radii: the disk in the door center touches
  // both jambs with exactly opposite normals, a constructed qualification
  // failure the report must record instead of throwing.
  crowd::CrowdScenario sc;
  sc.count = 1;
  sc.door_width = 2.0 * (sc.radius + sc.jamb_radius);
  Eigen::VectorXd wedged(2);
  wedged << sc.exit_center.x(), sc.exit_center.y();
  const SweepingProblem p = crowd::build_with_initial(sc, wedged);
  const std::vector<DiagnosticAnchor> anchors = {{0.0, wedged}};
  const DiagnosticsReport report =
      check_scenario(p, crowd::scenario_derived_params(sc),
                     /*use_gamma_estimate=*/true, anchors, 5, 20, 20,
                     0.15 * sc.radius);
  CHECK(report.degenerate_gradients);
}

TEST_CASE("sweep binary: exit codes and byte-identical reruns") {
  const char* cli = std::getenv("SWEEP_CLI");
  if (cli == nullptr) return;  // only run when ctest provides the binary

  const std::string dir = testing::temp_dir("cli_bin");
  const std::string config_path = dir + "/config.json";
  {
    std::ofstream out(config_path);
    out << R"({"scenario": {"type": "crowd", "count": 3}, "horizon": 0.5,
               "steps": 20, "seed": 99})";
  }
  const auto run = [&](const std::string& args) {
    return std::system((std::string(cli) + " " + args + " >/dev/null 2>&1").c_str());
  };
  CHECK(run("solve --config " + config_path + " --out " + dir + "/a") == 0);
  CHECK(run("solve --config " + config_path + " --out " + dir + "/b") == 0);
  CHECK(slurp(dir + "/a/trajectory.csv") == slurp(dir + "/b/trajectory.csv"));

  // Config errors exit with 2.
  const std::string bad_path = dir + "/bad.json";
  {
    std::ofstream out(bad_path);
    out << R"({"mystery": 1})";
  }
  const int code = run("solve --config " + bad_path + " --out " + dir + "/c");
  CHECK(WEXITSTATUS(code) == 2);

  CHECK(run("check --config " + config_path + " --out " + dir + "/d") == 0);
  CHECK(std::filesystem::exists(dir + "/d/diagnostics.json"));
}
