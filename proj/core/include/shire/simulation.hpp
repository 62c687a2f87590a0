#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "shire/abps.hpp"
#include "shire/engine.hpp"
#include "shire/lisp.hpp"
#include "shire/metrics.hpp"
#include "shire/mipv6.hpp"
#include "shire/scenario.hpp"

namespace shire {

struct RunResult {
  EventLog log;
  std::vector<DowntimeRecord> downtime;
  std::uint64_t deliveries = 0;
  std::uint64_t retransmissions = 0;  // ABPS only
  std::uint64_t relayed = 0;          // ABPS only
  std::uint64_t dup_dropped = 0;      // ABPS only
  std::uint64_t auth_rejected = 0;    // ABPS only
};

// One (scenario, protocol, seed) execution: builds the world, the link
// layer, the chosen mobility protocol and the traffic source on a fresh
// engine. Tests may inject extra events through engine() before run().
class Simulation {
 public:
  Simulation(const ScenarioConfig& cfg, Protocol protocol, std::uint64_t seed);
  ~Simulation();

  Engine& engine() { return engine_; }
  LinkLayer& link() { return *link_; }
  const World& world() const { return world_; }
  Correspondent& correspondent() { return *correspondent_; }
  ProxyClient* abps_client() { return abps_.get(); }
  ProxyServer* proxy() { return proxy_.get(); }
  Mipv6Node* mipv6_node() { return mipv6_.get(); }
  LispNode* lisp_node() { return lisp_.get(); }

  static constexpr FlowId kFlow = 1;

  RunResult run();

 private:
  void traffic_tick(Engine& e);

  ScenarioConfig cfg_;
  Protocol protocol_;
  std::uint64_t seed_;
  World world_;
  Engine engine_;
  std::unique_ptr<LinkLayer> link_;
  std::unique_ptr<Correspondent> correspondent_;
  std::unique_ptr<ProxyServer> proxy_;
  std::unique_ptr<ProxyClient> abps_;
  std::unique_ptr<Mipv6Node> mipv6_;
  std::unique_ptr<LispNode> lisp_;
};

}  // namespace shire
