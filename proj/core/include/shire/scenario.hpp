#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shire/abps.hpp"
#include "shire/adhoc.hpp"
#include "shire/lisp.hpp"
#include "shire/metrics.hpp"
#include "shire/mipv6.hpp"
#include "shire/world.hpp"

namespace shire {

struct TrafficConfig {
  double interval = 0.020;  // seconds between datagrams
  std::uint32_t payload_len = 160;
  friend bool operator==(const TrafficConfig&, const TrafficConfig&) = default;
};

struct RunConfig {
  double duration = 0;  // seconds
  std::vector<std::uint64_t> seeds;
  double dt = 0.1;  // coverage sampling step
  std::vector<Protocol> protocols;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct AdhocConfig {
  double radio_range = 100;
  double t_max = 0.1;
  double frame_latency = 0.001;
  std::vector<Point2D> nodes;
  friend bool operator==(const AdhocConfig&, const AdhocConfig&) = default;
};

inline bool operator==(const LinkParams& a, const LinkParams& b) {
  return a.frame_tx_latency == b.frame_tx_latency &&
         a.ack_timeout == b.ack_timeout &&
         a.association_delay == b.association_delay &&
         a.address_config_delay == b.address_config_delay &&
         a.wired_rtt_to_proxy == b.wired_rtt_to_proxy &&
         a.scan_interval == b.scan_interval;
}
inline bool operator==(const AbpsParams& a, const AbpsParams& b) {
  return a.retry_interval == b.retry_interval &&
         a.keepalive_interval == b.keepalive_interval &&
         a.failure_threshold == b.failure_threshold &&
         a.seq_window == b.seq_window &&
         a.proxy_to_correspondent_latency == b.proxy_to_correspondent_latency &&
         a.auth_key == b.auth_key;
}
inline bool operator==(const Mipv6Params& a, const Mipv6Params& b) {
  return a.router_adv_interval == b.router_adv_interval &&
         a.dad_delay == b.dad_delay &&
         a.binding_update_rtt == b.binding_update_rtt &&
         a.return_routability_rtt == b.return_routability_rtt &&
         a.home_agent_detour_latency == b.home_agent_detour_latency &&
         a.retry_interval == b.retry_interval &&
         a.failure_threshold == b.failure_threshold;
}
inline bool operator==(const LispParams& a, const LispParams& b) {
  return a.map_request_rtt == b.map_request_rtt &&
         a.map_cache_update_delay == b.map_cache_update_delay &&
         a.encap_latency == b.encap_latency &&
         a.non_lisp_config_delay == b.non_lisp_config_delay &&
         a.correspondent_lisp_enabled == b.correspondent_lisp_enabled &&
         a.retry_interval == b.retry_interval &&
         a.failure_threshold == b.failure_threshold;
}

// A whole experiment: geometry, link and protocol parameters, the traffic
// model and the run matrix. Scenario files are versionable artifacts; see
// the repository README for the grammar.
struct ScenarioConfig {
  std::string name;
  std::vector<AccessPoint> aps;
  std::vector<Obstacle> obstacles;
  WaypointPath path;
  LinkParams link;
  TrafficConfig traffic;
  RunConfig run;
  AbpsParams abps;
  Mipv6Params mipv6;
  LispParams lisp;
  std::optional<AdhocConfig> adhoc;

  World world() const { return World{aps, obstacles, path}; }
  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

struct Diagnostic {
  int line = 0;          // 1-based; 0 = file level
  std::string key;       // section or section.key
  std::string message;
  std::string to_string() const;
};

struct ParseResult {
  std::optional<ScenarioConfig> config;  // set iff diagnostics empty
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return diagnostics.empty(); }
};

// Full validation with line-anchored diagnostics; unknown sections and keys
// are rejected so typos never fall back to defaults silently.
ParseResult parse_scenario(const std::string& text);
ParseResult parse_scenario_file(const std::string& path);

// Canonical form; parse(print(config)) == config.
std::string print_scenario(const ScenarioConfig& config);

}  // namespace shire
