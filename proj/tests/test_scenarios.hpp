// Small synthetic scenarios shared across suites.
#pragma once

#include <string>

#include "shire/scenario.hpp"

namespace shire::testing {

inline std::string bundled_scenario_path() {
  return std::string(SHIRE_SCENARIO_DIR) + "/countryside.scn";
}

inline ScenarioConfig load_bundled() {
  ParseResult parsed = parse_scenario_file(bundled_scenario_path());
  if (!parsed.ok()) throw std::runtime_error("bundled scenario failed to parse");
  return *parsed.config;
}

// Walk across two overlapping cells: ap1 covers x in [-80, 80], ap2 covers
// [40, 200]; the handover lands at x = 80 (t = 65 s).
inline ScenarioConfig two_ap_walk() {
  ScenarioConfig cfg;
  cfg.name = "two-ap-walk";
  cfg.aps.push_back({"ap1", {0, 60}, 100, "w1", 0.010});
  cfg.aps.push_back({"ap2", {120, 60}, 100, "w2", 0.010});
  cfg.path.waypoints = {{-50, 0}, {250, 0}};
  cfg.path.speed = 2;
  cfg.run.duration = 120;
  cfg.run.seeds = {1};
  cfg.run.protocols = {Protocol::Abps};
  return cfg;
}

// One cell with a wall shading its center: coverage drops for |x| <= 42.86,
// i.e. t in [53.6, 96.4], and returns on the same AP.
inline ScenarioConfig walled_gap() {
  ScenarioConfig cfg;
  cfg.name = "walled-gap";
  cfg.aps.push_back({"ap1", {0, 200}, 300, "w1", 0.010});
  cfg.obstacles.push_back(Obstacle{{{-30, 50}, {30, 50}, {30, 60}, {-30, 60}}});
  cfg.path.waypoints = {{-150, 0}, {150, 0}};
  cfg.path.speed = 2;
  cfg.run.duration = 150;
  cfg.run.seeds = {1};
  cfg.run.protocols = {Protocol::Abps};
  return cfg;
}

// Two cells covering a parked node for the whole run; used for forced
// flapping and duplicate-suppression checks.
inline ScenarioConfig parked_dual_coverage(double duration = 60) {
  ScenarioConfig cfg;
  cfg.name = "parked-dual";
  cfg.aps.push_back({"ap1", {-20, 30}, 200, "w1", 0.010});
  cfg.aps.push_back({"ap2", {20, 30}, 200, "w2", 0.010});
  cfg.path.waypoints = {{0, 0}, {0, 0}};
  cfg.path.speed = 1;
  cfg.run.duration = duration;
  cfg.run.seeds = {1};
  cfg.run.protocols = {Protocol::Abps};
  return cfg;
}

}  // namespace shire::testing
