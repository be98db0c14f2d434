#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sweep/crowd.hpp"
#include "sweep/problem.hpp"

namespace sweep {

/// Scenario selector: a builtin analytic case or a crowd evacuation.
struct ScenarioConfig {
  enum class Kind { builtin, crowd };
  Kind kind = Kind::builtin;
  std::string builtin_name = "moving-wall-1d";
  crowd::CrowdScenario crowd;
  bool prune_pairs = false;  // crowd only
};

/// Parsed run configuration. Top-level keys: scenario, horizon, steps,
/// h_list, h_min, params, output_dir, seed. Anything else is an error.
struct RunConfig {
  ScenarioConfig scenario;
  double horizon = 0.0;  // 0 keeps the scenario default
  std::vector<int> steps = {100};
  std::vector<double> h_list;
  double h_min = 0.0;
  std::optional<AssumptionParams> params;
  bool gamma_given = false;  // params object carried an explicit gamma
  std::string output_dir = ".";
  std::uint64_t seed = 1;
};

/// Throws ConfigError on unknown keys, bad types or bad values.
RunConfig parse_config(const nlohmann::json& doc);

RunConfig load_config(const std::string& path);

/// Instantiates the configured scenario (placement included for crowds).
/// The returned problem carries the effective horizon.
SweepingProblem build_problem(const RunConfig& config);

}  // namespace sweep
