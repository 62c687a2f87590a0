#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "shire/datagram.hpp"
#include "shire/engine.hpp"
#include "shire/link.hpp"
#include "shire/time.hpp"

namespace shire {

struct AbpsParams {
  double retry_interval = 0.020;
  double keepalive_interval = 0.100;
  int failure_threshold = 3;
  int seq_window = 1024;
  double proxy_to_correspondent_latency = 0.010;
  AuthKey auth_key = 0x5eedf00dcafe1234ull;
};

struct NicQos {
  bool up = false;
  std::optional<SimTime> last_ack_at;
  int consecutive_failures = 0;
  std::optional<double> ewma_rtt;  // seconds
};

// Cross-layer per-interface statistics; fed by ack/timeout outcomes of both
// data and keepalive probes.
class QosMonitor {
 public:
  QosMonitor(int nic_count, int failure_threshold);

  void on_up(NicId id);
  void on_down(NicId id);
  void on_ack(NicId id, SimTime at, double rtt_seconds);
  void on_timeout(NicId id);

  bool usable(NicId id) const;  // up and failures below threshold
  const NicQos& nic(NicId id) const { return nics_.at(id); }
  int nic_count() const { return static_cast<int>(nics_.size()); }
  int failure_threshold() const { return failure_threshold_; }

  NicQos& nic_mutable(NicId id) { return nics_.at(id); }  // test fixtures

 private:
  std::vector<NicQos> nics_;
  int failure_threshold_;
};

// The most appropriate interface for the next datagram: usable NICs only,
// preferring fewer consecutive failures, then the interface currently
// carrying the flow (`prefer`), then the most recent ack, then the lower
// smoothed rtt, then the lower id. nullopt iff nothing is usable.
std::optional<NicId> select_nic(const QosMonitor& monitor,
                                std::optional<NicId> prefer = std::nullopt);

// Fallback when nothing is usable: the Up NIC that acked most recently.
// This is what keeps retransmissions flowing through a coverage gap.
std::optional<NicId> select_last_good(const QosMonitor& monitor);

class ProxyServer;

// Mobile-node half of the proxy pair: signs and stamps each datagram,
// picks the NIC per packet, retransmits on failure, and keeps standby
// interfaces warm with signed zero-payload probes.
class ProxyClient : public LinkObserver {
 public:
  ProxyClient(Engine& engine, LinkLayer& link, const World& world,
              AbpsParams params, FlowId flow);

  void start();
  void send(std::uint32_t payload_len);  // application datagram

  const QosMonitor& monitor() const { return monitor_; }
  std::uint64_t retransmissions() const { return retransmissions_; }
  std::uint64_t queued_now() const { return pending_.size(); }
  std::uint64_t next_seq() const { return next_seq_; }

  // LinkObserver
  void on_nic_up(NicId, const std::string& ap, const std::string& addr) override;
  void on_nic_down(NicId) override;
  void on_tx_result(NicId, const Datagram&, TxOutcome, SimTime tx) override;

 private:
  void transmit_on(NicId nic, Datagram dgram);
  void dispatch(Datagram dgram);   // select NIC or queue
  void drain(bool blind_allowed);
  void ensure_retry_tick();
  void retry_tick(Engine&);
  void keepalive_tick(Engine&);
  void retarget_tick(Engine&);

  Engine& engine_;
  LinkLayer& link_;
  const World& world_;
  AbpsParams params_;
  FlowId flow_;
  QosMonitor monitor_;
  std::uint64_t next_seq_ = 1;
  std::uint64_t next_probe_seq_ = 1;
  std::map<std::uint64_t, int> attempts_;   // seq -> attempts so far
  std::map<std::uint64_t, Datagram> pending_;  // queued, not in flight
  std::optional<std::uint64_t> blind_inflight_;
  std::optional<NicId> last_used_;
  bool retry_tick_scheduled_ = false;
  std::uint64_t retransmissions_ = 0;
};

// Correspondent node behind the proxy; terminates the measured path.
class Correspondent {
 public:
  explicit Correspondent(Engine& engine) : engine_(engine) {}

  void deliver(const Datagram& d, SimTime at);

  // seq -> delivery count, per flow
  const std::map<std::uint64_t, int>& deliveries(FlowId flow) const;
  std::uint64_t total() const { return total_; }

 private:
  Engine& engine_;
  std::map<FlowId, std::map<std::uint64_t, int>> per_flow_;
  std::uint64_t total_ = 0;
};

// Fixed-host half of the pair: authenticates the sender from the keyed tag
// alone, deduplicates by sequence number, and relays to the correspondent
// with the proxy as the visible source.
class ProxyServer {
 public:
  ProxyServer(Engine& engine, Correspondent& correspondent,
              double to_correspondent_latency, int seq_window);

  void register_flow(FlowId flow, AuthKey key);

  // identify_sender: flow id iff the tag verifies; independent of
  // src_locator and hop_trace by construction.
  std::optional<FlowId> identify(const Datagram& d) const;

  // Wire-side entry for datagrams arriving from any AP or relay path.
  void receive(const Datagram& d, SimTime at);

  std::uint64_t relayed() const { return relayed_; }
  std::uint64_t dup_dropped() const { return dup_dropped_; }
  std::uint64_t auth_rejected() const { return auth_rejected_; }

 private:
  struct DedupWindow {
    std::uint64_t highest = 0;
    bool any = false;
    std::set<std::uint64_t> seen;  // within [highest - window + 1, highest]
  };
  struct FlowState {
    AuthKey key = 0;
    DedupWindow window[2];  // per direction
  };

  bool record_new(DedupWindow& w, std::uint64_t seq);

  Engine& engine_;
  Correspondent& correspondent_;
  double to_correspondent_latency_;
  int seq_window_;
  std::map<FlowId, FlowState> flows_;
  std::uint64_t relayed_ = 0;
  std::uint64_t dup_dropped_ = 0;
  std::uint64_t auth_rejected_ = 0;
};

}  // namespace shire
