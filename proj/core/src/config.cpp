#include "sweep/config.hpp"

#include <fstream>
#include <set>

#include "sweep/builtins.hpp"

namespace sweep {

namespace {

void reject_unknown_keys(const nlohmann::json& obj,
                         const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.contains(key)) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

double require_number(const nlohmann::json& v, const std::string& what) {
  if (!v.is_number()) throw ConfigError(what + " must be a number");
  return v.get<double>();
}

ScenarioConfig parse_scenario(const nlohmann::json& v) {
  ScenarioConfig sc;
  std::string type;
  const nlohmann::json* obj = nullptr;
  if (v.is_string()) {
    type = v.get<std::string>();
  } else if (v.is_object()) {
    if (!v.contains("type") || !v["type"].is_string()) {
      throw ConfigError("scenario object needs a string 'type'");
    }
    type = v["type"].get<std::string>();
    obj = &v;
  } else {
    throw ConfigError("scenario must be a string or an object");
  }

  if (type.rfind("builtin:", 0) == 0) {
    sc.kind = ScenarioConfig::Kind::builtin;
    sc.builtin_name = type.substr(8);
    if (!builtins::is_builtin(sc.builtin_name)) {
      throw ConfigError("unknown builtin scenario: " + sc.builtin_name);
    }
    if (obj != nullptr) reject_unknown_keys(*obj, {"type"}, "scenario");
    return sc;
  }
  if (type != "crowd") {
    throw ConfigError("scenario type must be 'crowd' or 'builtin:<name>'");
  }
  sc.kind = ScenarioConfig::Kind::crowd;
  if (obj == nullptr) return sc;

  reject_unknown_keys(*obj,
                      {"type", "count", "radius", "room_width", "room_height",
                       "exit_center", "jamb_radius", "door_width",
                       "desired_speed", "prune_pairs"},
                      "scenario");
  crowd::CrowdScenario& c = sc.crowd;
  if (obj->contains("count")) {
    if (!(*obj)["count"].is_number_integer()) {
      throw ConfigError("scenario count must be an integer");
    }
    c.count = (*obj)["count"].get<int>();
  }
  if (obj->contains("radius")) c.radius = require_number((*obj)["radius"], "radius");
  if (obj->contains("room_width")) {
    c.room_width = require_number((*obj)["room_width"], "room_width");
  }
  if (obj->contains("room_height")) {
    c.room_height = require_number((*obj)["room_height"], "room_height");
  }
  if (obj->contains("exit_center")) {
    const auto& e = (*obj)["exit_center"];
    if (!e.is_array() || e.size() != 2) {
      throw ConfigError("exit_center must be a two-element array");
    }
    c.exit_center = {require_number(e[0], "exit_center[0]"),
                     require_number(e[1], "exit_center[1]")};
  }
  if (obj->contains("jamb_radius")) {
    c.jamb_radius = require_number((*obj)["jamb_radius"], "jamb_radius");
  }
  if (obj->contains("door_width")) {
    c.door_width = require_number((*obj)["door_width"], "door_width");
  }
  if (obj->contains("desired_speed")) {
    c.desired_speed = require_number((*obj)["desired_speed"], "desired_speed");
  }
  if (obj->contains("prune_pairs")) {
    if (!(*obj)["prune_pairs"].is_boolean()) {
      throw ConfigError("prune_pairs must be a boolean");
    }
    sc.prune_pairs = (*obj)["prune_pairs"].get<bool>();
  }
  return sc;
}

AssumptionParams parse_params(const nlohmann::json& v, bool& gamma_given) {
  if (!v.is_object()) throw ConfigError("params must be an object");
  reject_unknown_keys(
      v, {"alpha", "beta", "m_bound", "rho", "gamma", "c_margin", "k_lip"},
      "params");
  AssumptionParams p;
  if (v.contains("alpha")) p.alpha = require_number(v["alpha"], "alpha");
  if (v.contains("beta")) p.beta = require_number(v["beta"], "beta");
  if (v.contains("m_bound")) p.m_bound = require_number(v["m_bound"], "m_bound");
  if (v.contains("rho")) p.rho = require_number(v["rho"], "rho");
  if (v.contains("gamma")) {
    p.gamma = require_number(v["gamma"], "gamma");
    gamma_given = true;
  }
  if (v.contains("c_margin")) p.c_margin = require_number(v["c_margin"], "c_margin");
  if (v.contains("k_lip")) p.k_lip = require_number(v["k_lip"], "k_lip");
  try {
    validate_params(p);
  } catch (const SolverError& e) {
    throw ConfigError(std::string("bad params: ") + e.what());
  }
  return p;
}

}  // namespace

RunConfig parse_config(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown_keys(doc,
                      {"scenario", "horizon", "steps", "h_list", "h_min",
                       "params", "output_dir", "seed"},
                      "config");
  RunConfig cfg;
  if (doc.contains("scenario")) cfg.scenario = parse_scenario(doc["scenario"]);
  if (doc.contains("horizon")) {
    cfg.horizon = require_number(doc["horizon"], "horizon");
    if (!(cfg.horizon > 0.0)) throw ConfigError("horizon must be positive");
  }
  if (doc.contains("steps")) {
    cfg.steps.clear();
    const auto& s = doc["steps"];
    if (s.is_number_integer()) {
      cfg.steps.push_back(s.get<int>());
    } else if (s.is_array()) {
      for (const auto& v : s) {
        if (!v.is_number_integer()) throw ConfigError("steps must be integers");
        cfg.steps.push_back(v.get<int>());
      }
    } else {
      throw ConfigError("steps must be an integer or an integer array");
    }
    if (cfg.steps.empty()) throw ConfigError("steps must not be empty");
    for (const int n : cfg.steps) {
      if (n < 1) throw ConfigError("steps must be >= 1");
    }
  }
  if (doc.contains("h_list")) {
    if (!doc["h_list"].is_array()) throw ConfigError("h_list must be an array");
    for (const auto& v : doc["h_list"]) {
      const double h = require_number(v, "h_list entry");
      if (!(h > 0.0)) throw ConfigError("h_list entries must be positive");
      cfg.h_list.push_back(h);
    }
  }
  if (doc.contains("h_min")) {
    cfg.h_min = require_number(doc["h_min"], "h_min");
    if (!(cfg.h_min > 0.0)) throw ConfigError("h_min must be positive");
  }
  if (doc.contains("params")) {
    cfg.params = parse_params(doc["params"], cfg.gamma_given);
  }
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string()) {
      throw ConfigError("output_dir must be a string");
    }
    cfg.output_dir = doc["output_dir"].get<std::string>();
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_integer()) {
      throw ConfigError("seed must be an integer");
    }
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return parse_config(doc);
}

SweepingProblem build_problem(const RunConfig& config) {
  if (config.scenario.kind == ScenarioConfig::Kind::builtin) {
    return builtins::make(config.scenario.builtin_name, config.horizon);
  }
  crowd::CrowdScenario sc = config.scenario.crowd;
  sc.seed = config.seed;
  crowd::BuildOptions opts;
  opts.prune_pairs = config.scenario.prune_pairs;
  SweepingProblem problem = crowd::build(sc, opts);
  problem.horizon = config.horizon > 0.0 ? config.horizon : 4.0;
  return problem;
}

}  // namespace sweep
