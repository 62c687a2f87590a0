#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "shire/abps.hpp"
#include "shire/datagram.hpp"
#include "shire/engine.hpp"
#include "shire/link.hpp"

namespace shire {

struct LispParams {
  double map_request_rtt = 0.5;
  double map_cache_update_delay = 0.5;
  double encap_latency = 0.005;
  double non_lisp_config_delay = 1.0;
  bool correspondent_lisp_enabled = false;
  double retry_interval = 0.020;
  int failure_threshold = 3;
};

struct MapCacheEntry {
  std::string endpoint_id;
  std::string locator;
  bool valid = false;
};

// Simplified LISP mobile node: a locator change invalidates the map cache;
// traffic resumes after the mapping lookup and cache update, plus the extra
// configuration round when the correspondent has no LISP router.
class LispNode : public LinkObserver {
 public:
  LispNode(Engine& engine, LinkLayer& link, const World& world,
           Correspondent& correspondent, LispParams params, FlowId flow);

  void start();
  void send(std::uint32_t payload_len);

  const MapCacheEntry& cache() const { return cache_; }
  std::uint64_t queued_now() const { return pending_.size(); }

  // LinkObserver
  void on_nic_up(NicId, const std::string& ap, const std::string& addr) override;
  void on_nic_down(NicId) override;
  void on_tx_result(NicId, const Datagram&, TxOutcome, SimTime tx) override;

 private:
  bool can_transmit() const;
  void transmit(Datagram dgram);
  void drain();
  void ensure_retry_tick();

  Engine& engine_;
  LinkLayer& link_;
  const World& world_;
  Correspondent& correspondent_;
  LispParams params_;
  FlowId flow_;
  QosMonitor monitor_;
  MapCacheEntry cache_;
  std::uint64_t handover_gen_ = 0;
  std::uint64_t next_seq_ = 1;
  std::map<std::uint64_t, Datagram> pending_;
  bool retry_tick_scheduled_ = false;
};

}  // namespace shire
