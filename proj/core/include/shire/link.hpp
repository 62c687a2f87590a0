#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shire/datagram.hpp"
#include "shire/engine.hpp"
#include "shire/world.hpp"

namespace shire {

using NicId = int;

enum class NicPhase : std::uint8_t { Down, Scanning, Associating, Configuring, Up };
const char* to_string(NicPhase phase);

struct NicState {
  NicId id = 0;
  NicPhase phase = NicPhase::Scanning;
  std::optional<std::string> associated_ap;  // set iff Configuring or Up
  std::optional<std::string> pending_ap;     // target while Associating
  std::optional<std::string> local_address;  // set iff Up
};

struct LinkParams {
  double frame_tx_latency = 0.002;     // node <-> AP, one way
  double ack_timeout = 0.030;
  double association_delay = 0.5;
  double address_config_delay = 1.0;   // DHCP / RS-RA style
  double wired_rtt_to_proxy = 0.020;
  double scan_interval = 0.5;          // scanning NICs retry at this cadence
};

// One frame in flight between a NIC and its AP.
struct Frame {
  NicId src_nic = 0;
  std::string dst;  // AP id
  Datagram payload;
  SimTime tx_time;
};

enum class TxOutcome { AckReceived, AckTimeout };

// Cross-layer feedback delivered to the protocol above.
class LinkObserver {
 public:
  virtual ~LinkObserver() = default;
  virtual void on_nic_up(NicId, const std::string& ap_id,
                         const std::string& address) {}
  virtual void on_nic_down(NicId) {}
  virtual void on_tx_result(NicId, const Datagram&, TxOutcome,
                            SimTime tx_time) {}
};

// Per-node data-link model: NIC association state machines driven by
// geometric coverage, frame transmission with per-frame ack feedback, and
// the scan loop that re-attempts association every scan_interval.
class LinkLayer {
 public:
  // Association target for a scanning NIC, or nullopt to keep scanning.
  // `covered` holds the ids of the APs currently covering the node.
  using ApPolicy = std::function<std::optional<std::string>(
      NicId, const std::vector<std::string>& covered)>;

  // Receives datagrams that reached an AP, at the AP-reception instant.
  using UpstreamSink =
      std::function<void(const Datagram&, const AccessPoint& via, SimTime at)>;

  LinkLayer(Engine& engine, const World& world, LinkParams params,
            int nic_count, std::string node_entity);

  void set_observer(LinkObserver* obs) { observer_ = obs; }
  void set_ap_policy(ApPolicy policy) { ap_policy_ = std::move(policy); }
  void set_upstream(UpstreamSink sink) { upstream_ = std::move(sink); }
  // Baselines tear the forwarding path down with the link; ABPS frames that
  // already reached the AP still travel on (the proxy deduplicates).
  void set_cancel_upstream_on_down(bool v) { cancel_upstream_on_down_ = v; }

  void start();  // schedules the scan loop at t=0

  const LinkParams& params() const { return params_; }
  int nic_count() const { return static_cast<int>(nics_.size()); }
  const NicState& nic(NicId id) const { return nics_.at(id).state; }

  // Transmits on an Up NIC; anything else is a protocol bug and throws.
  // The outcome arrives via LinkObserver::on_tx_result. Frames whose AP
  // reception succeeds are handed to the upstream sink unless
  // wants_upstream is false (link-local probes).
  void transmit(NicId id, const Datagram& dgram, bool wants_upstream = true);

  // Begins association toward ap_id; the NIC must be Down or Scanning and
  // the node must currently be covered by that AP. Coverage is re-checked
  // at each stage boundary; losing it reverts the NIC to Scanning.
  void associate(NicId id, const std::string& ap_id);

  // Drops association and address; pending frames resolve as AckTimeout at
  // their original tx_time + ack_timeout. Idempotent.
  void link_down(NicId id);

  // link_down plus immediate association to a new AP.
  void retarget(NicId id, const std::string& ap_id);

  // Administrative disable/enable (test hook for forced flapping).
  void set_admin_down(NicId id, bool down);

 private:
  struct PendingFrame {
    Frame frame;
    EventHandle ack_event;       // valid iff the frame will be acked
    EventHandle upstream_event;  // valid iff an upstream handoff is scheduled
  };
  struct Nic {
    NicState state;
    std::uint64_t generation = 0;  // bumped on any teardown; stales stage events
    std::map<std::uint64_t, PendingFrame> pending;  // frame id -> in flight
    bool admin_down = false;
  };

  void scan_tick(Engine&);
  void enter_up(NicId id, const std::string& ap_id);
  void fail_association(NicId id, const std::string& ap_id);
  std::string log_entity(NicId id) const;

  Engine& engine_;
  const World& world_;
  LinkParams params_;
  std::string node_entity_;
  LinkObserver* observer_ = nullptr;
  ApPolicy ap_policy_;
  UpstreamSink upstream_;
  bool cancel_upstream_on_down_ = false;
  std::vector<Nic> nics_;
  std::uint64_t next_frame_id_ = 1;
  std::uint64_t next_address_ = 0;
};

}  // namespace shire
