#include "shire/abps.hpp"

#include <algorithm>
#include <limits>

namespace shire {

namespace {
constexpr double kRttEwmaAlpha = 0.125;
}

QosMonitor::QosMonitor(int nic_count, int failure_threshold)
    : nics_(nic_count), failure_threshold_(failure_threshold) {}

void QosMonitor::on_up(NicId id) {
  NicQos& q = nics_.at(id);
  q.up = true;
  q.consecutive_failures = 0;
}

void QosMonitor::on_down(NicId id) { nics_.at(id).up = false; }

void QosMonitor::on_ack(NicId id, SimTime at, double rtt_seconds) {
  NicQos& q = nics_.at(id);
  q.last_ack_at = at;
  q.consecutive_failures = 0;
  q.ewma_rtt = q.ewma_rtt ? (*q.ewma_rtt + kRttEwmaAlpha * (rtt_seconds - *q.ewma_rtt))
                          : rtt_seconds;
}

void QosMonitor::on_timeout(NicId id) { ++nics_.at(id).consecutive_failures; }

bool QosMonitor::usable(NicId id) const {
  const NicQos& q = nics_.at(id);
  return q.up && q.consecutive_failures < failure_threshold_;
}

namespace {

// lower is better
bool qos_better(const NicQos& a, NicId ida, const NicQos& b, NicId idb,
                std::optional<NicId> prefer) {
  if (a.consecutive_failures != b.consecutive_failures)
    return a.consecutive_failures < b.consecutive_failures;
  // stick to the interface in use until the feedback turns against it;
  // flapping between equally healthy NICs would renumber nothing but churn
  // the path
  if (prefer) {
    bool pa = ida == *prefer, pb = idb == *prefer;
    if (pa != pb) return pa;
  }
  std::int64_t la = a.last_ack_at ? a.last_ack_at->us() : -1;
  std::int64_t lb = b.last_ack_at ? b.last_ack_at->us() : -1;
  if (la != lb) return la > lb;
  double ra = a.ewma_rtt ? *a.ewma_rtt : std::numeric_limits<double>::infinity();
  double rb = b.ewma_rtt ? *b.ewma_rtt : std::numeric_limits<double>::infinity();
  if (ra != rb) return ra < rb;
  return ida < idb;
}

}  // namespace

std::optional<NicId> select_nic(const QosMonitor& monitor,
                                std::optional<NicId> prefer) {
  std::optional<NicId> best;
  for (NicId id = 0; id < monitor.nic_count(); ++id) {
    if (!monitor.usable(id)) continue;
    if (!best ||
        qos_better(monitor.nic(id), id, monitor.nic(*best), *best, prefer))
      best = id;
  }
  return best;
}

std::optional<NicId> select_last_good(const QosMonitor& monitor) {
  std::optional<NicId> best;
  for (NicId id = 0; id < monitor.nic_count(); ++id) {
    const NicQos& q = monitor.nic(id);
    if (!q.up) continue;
    if (!best) {
      best = id;
      continue;
    }
    const NicQos& b = monitor.nic(*best);
    std::int64_t la = q.last_ack_at ? q.last_ack_at->us() : -1;
    std::int64_t lb = b.last_ack_at ? b.last_ack_at->us() : -1;
    if (la > lb) best = id;
  }
  return best;
}

ProxyClient::ProxyClient(Engine& engine, LinkLayer& link, const World& world,
                         AbpsParams params, FlowId flow)
    : engine_(engine),
      link_(link),
      world_(world),
      params_(params),
      flow_(flow),
      monitor_(link.nic_count(), params.failure_threshold) {}

void ProxyClient::start() {
  link_.set_observer(this);
  // scanning NICs claim distinct APs: a standby interface is only useful on
  // a network the active one is not using
  link_.set_ap_policy([this](NicId id, const std::vector<std::string>& covered)
                          -> std::optional<std::string> {
    Point2D pos = world_.path.position_at(engine_.now());
    std::optional<std::string> best;
    double best_d = 0;
    for (const std::string& ap_id : covered) {
      bool used = false;
      for (int other = 0; other < link_.nic_count(); ++other) {
        if (other == id) continue;
        const NicState& o = link_.nic(other);
        if ((o.associated_ap && *o.associated_ap == ap_id) ||
            (o.pending_ap && *o.pending_ap == ap_id))
          used = true;
      }
      if (used) continue;
      double d = distance(pos, world_.find_ap(ap_id)->position);
      if (!best || d < best_d) {
        best = ap_id;
        best_d = d;
      }
    }
    return best;
  });
  engine_.schedule(engine_.now() + sim_seconds(params_.keepalive_interval),
                   [this](Engine& e) { keepalive_tick(e); });
  engine_.schedule(engine_.now() + sim_seconds(link_.params().scan_interval),
                   [this](Engine& e) { retarget_tick(e); });
}

void ProxyClient::send(std::uint32_t payload_len) {
  Datagram d;
  d.flow_id = flow_;
  d.seq = next_seq_++;
  d.direction = Direction::Up;
  d.kind = PayloadKind::Data;
  d.payload_len = payload_len;
  d.payload_digest = synth_payload_digest(flow_, d.seq, payload_len);
  sign(d, params_.auth_key);
  dispatch(std::move(d));
}

void ProxyClient::transmit_on(NicId nic, Datagram dgram) {
  last_used_ = nic;
  dgram.src_locator = *link_.nic(nic).local_address;
  dgram.hop_trace.clear();
  int& attempts = attempts_[dgram.seq];
  if (++attempts > 1) ++retransmissions_;
  link_.transmit(nic, dgram, true);
}

void ProxyClient::dispatch(Datagram dgram) {
  if (auto nic = select_nic(monitor_, last_used_)) {
    transmit_on(*nic, std::move(dgram));
  } else {
    std::uint64_t seq = dgram.seq;
    pending_.emplace(seq, std::move(dgram));
    ensure_retry_tick();
  }
}

void ProxyClient::drain(bool blind_allowed) {
  while (!pending_.empty()) {
    auto nic = select_nic(monitor_, last_used_);
    if (nic) {
      auto it = pending_.begin();
      Datagram d = std::move(it->second);
      pending_.erase(it);
      transmit_on(*nic, std::move(d));
      continue;
    }
    // nothing usable: keep the head-of-line datagram probing on the
    // interface that worked most recently, one attempt at a time
    if (blind_allowed && !blind_inflight_) {
      if (auto last_good = select_last_good(monitor_)) {
        auto it = pending_.begin();
        Datagram d = std::move(it->second);
        blind_inflight_ = it->first;
        pending_.erase(it);
        transmit_on(*last_good, std::move(d));
      }
    }
    break;
  }
}

void ProxyClient::ensure_retry_tick() {
  if (retry_tick_scheduled_ || pending_.empty()) return;
  retry_tick_scheduled_ = true;
  engine_.schedule(engine_.now() + sim_seconds(params_.retry_interval),
                   [this](Engine& e) { retry_tick(e); });
}

void ProxyClient::retry_tick(Engine&) {
  retry_tick_scheduled_ = false;
  drain(true);
  ensure_retry_tick();
}

void ProxyClient::keepalive_tick(Engine& e) {
  for (NicId id = 0; id < link_.nic_count(); ++id) {
    if (link_.nic(id).phase != NicPhase::Up) continue;
    Datagram probe;
    probe.flow_id = flow_;
    probe.seq = next_probe_seq_++;
    probe.direction = Direction::Up;
    probe.kind = PayloadKind::Probe;
    probe.payload_len = 0;
    probe.payload_digest = 0;
    sign(probe, params_.auth_key);
    probe.src_locator = *link_.nic(id).local_address;
    link_.transmit(id, probe, /*wants_upstream=*/false);
  }
  e.schedule(e.now() + sim_seconds(params_.keepalive_interval),
             [this](Engine& en) { keepalive_tick(en); });
}

void ProxyClient::retarget_tick(Engine& e) {
  for (NicId id = 0; id < link_.nic_count(); ++id) {
    const NicState& st = link_.nic(id);
    if (st.phase != NicPhase::Up || monitor_.usable(id)) continue;
    Point2D pos = world_.path.position_at(e.now());
    std::optional<std::string> best;
    double best_d = 0;
    for (const std::string& ap_id : world_.covered_aps(e.now())) {
      if (st.associated_ap && *st.associated_ap == ap_id) continue;
      bool used = false;
      for (int other = 0; other < link_.nic_count(); ++other) {
        if (other == id) continue;
        const NicState& o = link_.nic(other);
        if ((o.associated_ap && *o.associated_ap == ap_id) ||
            (o.pending_ap && *o.pending_ap == ap_id))
          used = true;
      }
      if (used) continue;
      double d = distance(pos, world_.find_ap(ap_id)->position);
      if (!best || d < best_d) {
        best = ap_id;
        best_d = d;
      }
    }
    if (best) link_.retarget(id, *best);
  }
  e.schedule(e.now() + sim_seconds(link_.params().scan_interval),
             [this](Engine& en) { retarget_tick(en); });
}

void ProxyClient::on_nic_up(NicId id, const std::string&, const std::string&) {
  monitor_.on_up(id);
  drain(false);
}

void ProxyClient::on_nic_down(NicId id) { monitor_.on_down(id); }

void ProxyClient::on_tx_result(NicId nic, const Datagram& d, TxOutcome outcome,
                               SimTime tx) {
  if (outcome == TxOutcome::AckReceived) {
    monitor_.on_ack(nic, engine_.now(), (engine_.now() - tx).seconds());
  } else {
    monitor_.on_timeout(nic);
  }
  if (d.kind == PayloadKind::Probe) return;

  if (outcome == TxOutcome::AckReceived) {
    attempts_.erase(d.seq);
    if (blind_inflight_ && *blind_inflight_ == d.seq) blind_inflight_.reset();
    drain(false);
    return;
  }
  if (blind_inflight_ && *blind_inflight_ == d.seq) blind_inflight_.reset();
  if (auto sel = select_nic(monitor_, last_used_)) {
    // immediate switchover; the datagram keeps its seq and gets the fresh
    // interface's locator
    transmit_on(*sel, d);
  } else {
    pending_.emplace(d.seq, d);
    ensure_retry_tick();
  }
}

void Correspondent::deliver(const Datagram& d, SimTime) {
  engine_.log("corr", "deliver",
              Detail()
                  .add("flow", static_cast<std::uint64_t>(d.flow_id))
                  .add("seq", d.seq)
                  .str());
  per_flow_[d.flow_id][d.seq] += 1;
  ++total_;
}

const std::map<std::uint64_t, int>& Correspondent::deliveries(
    FlowId flow) const {
  static const std::map<std::uint64_t, int> kEmpty;
  auto it = per_flow_.find(flow);
  return it == per_flow_.end() ? kEmpty : it->second;
}

ProxyServer::ProxyServer(Engine& engine, Correspondent& correspondent,
                         double to_correspondent_latency, int seq_window)
    : engine_(engine),
      correspondent_(correspondent),
      to_correspondent_latency_(to_correspondent_latency),
      seq_window_(seq_window) {}

void ProxyServer::register_flow(FlowId flow, AuthKey key) {
  flows_[flow].key = key;
}

std::optional<FlowId> ProxyServer::identify(const Datagram& d) const {
  auto it = flows_.find(d.flow_id);
  if (it == flows_.end()) return std::nullopt;
  if (!verify(d, it->second.key)) return std::nullopt;
  return d.flow_id;
}

bool ProxyServer::record_new(DedupWindow& w, std::uint64_t seq) {
  if (w.any) {
    // below the window floor: either delivered long ago or abandoned; never
    // relay it again
    if (seq + static_cast<std::uint64_t>(seq_window_) <= w.highest) return false;
    if (w.seen.count(seq)) return false;
  }
  w.any = true;
  w.seen.insert(seq);
  if (seq > w.highest) w.highest = seq;
  while (!w.seen.empty() &&
         *w.seen.begin() + static_cast<std::uint64_t>(seq_window_) <= w.highest)
    w.seen.erase(w.seen.begin());
  return true;
}

void ProxyServer::receive(const Datagram& d, SimTime) {
  std::string detail = Detail()
                           .add("flow", static_cast<std::uint64_t>(d.flow_id))
                           .add("seq", d.seq)
                           .str();
  auto flow = identify(d);
  if (!flow) {
    ++auth_rejected_;
    engine_.log("proxy", "drop-auth", detail);
    return;
  }
  FlowState& fs = flows_.at(*flow);
  DedupWindow& w = fs.window[static_cast<int>(d.direction)];
  if (!record_new(w, d.seq)) {
    ++dup_dropped_;
    engine_.log("proxy", "drop-dup", detail);
    return;
  }
  ++relayed_;
  engine_.log("proxy", "relay", detail);
  Datagram out = d;
  out.src_locator = "proxy";  // the correspondent sees the proxy as sender
  out.hop_trace.push_back("proxy");
  engine_.schedule(engine_.now() + sim_seconds(to_correspondent_latency_),
                   [this, out](Engine& e) { correspondent_.deliver(out, e.now()); });
}

}  // namespace shire
