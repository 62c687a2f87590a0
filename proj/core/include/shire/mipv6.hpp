#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "shire/abps.hpp"
#include "shire/datagram.hpp"
#include "shire/engine.hpp"
#include "shire/link.hpp"
#include "shire/rng.hpp"

namespace shire {

struct Mipv6Params {
  double router_adv_interval = 3.0;
  double dad_delay = 1.0;
  double binding_update_rtt = 0.5;
  double return_routability_rtt = 1.5;
  double home_agent_detour_latency = 0.030;
  double retry_interval = 0.020;
  int failure_threshold = 3;
};

struct BindingState {
  std::optional<std::string> care_of_address;
  bool home_binding_valid = false;
  bool correspondent_binding_valid = false;  // implies home_binding_valid
};

// Simplified MIPv6 mobile node: one active NIC; every re-association pays
// router discovery, DAD, the home binding update, and return routability
// plus the correspondent binding update before traffic resumes.
class Mipv6Node : public LinkObserver {
 public:
  Mipv6Node(Engine& engine, LinkLayer& link, const World& world,
            Correspondent& correspondent, Mipv6Params params, FlowId flow,
            RngStream rng);

  void start();
  void send(std::uint32_t payload_len);

  const BindingState& binding() const { return binding_; }
  BindingState& binding_mutable() { return binding_; }  // unit-test fixture
  bool handover_in_progress() const { return handover_in_progress_; }
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
  Mipv6Params params_;
  FlowId flow_;
  RngStream rng_;
  QosMonitor monitor_;
  BindingState binding_;
  bool handover_in_progress_ = false;
  std::uint64_t handover_gen_ = 0;
  std::uint64_t next_seq_ = 1;
  std::map<std::uint64_t, Datagram> pending_;
  bool retry_tick_scheduled_ = false;
};

}  // namespace shire
