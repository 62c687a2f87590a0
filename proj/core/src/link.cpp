#include "shire/link.hpp"

#include <stdexcept>

namespace shire {

const char* to_string(NicPhase phase) {
  switch (phase) {
    case NicPhase::Down: return "down";
    case NicPhase::Scanning: return "scanning";
    case NicPhase::Associating: return "associating";
    case NicPhase::Configuring: return "configuring";
    case NicPhase::Up: return "up";
  }
  return "?";
}

LinkLayer::LinkLayer(Engine& engine, const World& world, LinkParams params,
                     int nic_count, std::string node_entity)
    : engine_(engine),
      world_(world),
      params_(params),
      node_entity_(std::move(node_entity)) {
  nics_.resize(nic_count);
  for (int i = 0; i < nic_count; ++i) nics_[i].state.id = i;
}

std::string LinkLayer::log_entity(NicId id) const {
  return "nic" + std::to_string(id);
}

void LinkLayer::start() {
  engine_.schedule(engine_.now(), [this](Engine& e) { scan_tick(e); });
}

void LinkLayer::scan_tick(Engine& e) {
  if (ap_policy_) {
    std::vector<std::string> covered = world_.covered_aps(e.now());
    for (Nic& nic : nics_) {
      if (nic.admin_down || nic.state.phase != NicPhase::Scanning) continue;
      if (auto target = ap_policy_(nic.state.id, covered)) {
        const AccessPoint* ap = world_.find_ap(*target);
        if (ap && world_.covered_at(e.now(), *ap))
          associate(nic.state.id, *target);
      }
    }
  }
  e.schedule(e.now() + sim_seconds(params_.scan_interval),
             [this](Engine& en) { scan_tick(en); });
}

void LinkLayer::associate(NicId id, const std::string& ap_id) {
  Nic& nic = nics_.at(id);
  if (nic.state.phase != NicPhase::Down &&
      nic.state.phase != NicPhase::Scanning)
    throw std::logic_error("associate on NIC in state " +
                           std::string(to_string(nic.state.phase)));
  const AccessPoint* ap = world_.find_ap(ap_id);
  if (!ap) throw std::logic_error("associate to unknown AP " + ap_id);
  if (!world_.covered_at(engine_.now(), *ap))
    throw std::logic_error("associate while not covered by " + ap_id);

  nic.state.phase = NicPhase::Associating;
  nic.state.pending_ap = ap_id;
  engine_.log(log_entity(id), "assoc-start", Detail().add("ap", ap_id).str());

  std::uint64_t gen = nic.generation;
  engine_.schedule(
      engine_.now() + sim_seconds(params_.association_delay),
      [this, id, ap_id, gen](Engine& e) {
        Nic& n = nics_.at(id);
        if (n.generation != gen || n.state.phase != NicPhase::Associating)
          return;
        const AccessPoint* a = world_.find_ap(ap_id);
        if (!world_.covered_at(e.now(), *a)) {
          fail_association(id, ap_id);
          return;
        }
        n.state.phase = NicPhase::Configuring;
        n.state.pending_ap.reset();
        n.state.associated_ap = ap_id;
        e.schedule(e.now() + sim_seconds(params_.address_config_delay),
                   [this, id, ap_id, gen](Engine& e2) {
                     Nic& n2 = nics_.at(id);
                     if (n2.generation != gen ||
                         n2.state.phase != NicPhase::Configuring)
                       return;
                     const AccessPoint* a2 = world_.find_ap(ap_id);
                     if (!world_.covered_at(e2.now(), *a2)) {
                       n2.state.associated_ap.reset();
                       fail_association(id, ap_id);
                       return;
                     }
                     enter_up(id, ap_id);
                   });
      });
}

void LinkLayer::fail_association(NicId id, const std::string& ap_id) {
  Nic& nic = nics_.at(id);
  nic.state.phase = NicPhase::Scanning;
  nic.state.pending_ap.reset();
  engine_.log(log_entity(id), "assoc-fail", Detail().add("ap", ap_id).str());
}

void LinkLayer::enter_up(NicId id, const std::string& ap_id) {
  Nic& nic = nics_.at(id);
  const AccessPoint* ap = world_.find_ap(ap_id);
  nic.state.phase = NicPhase::Up;
  // every address is fresh; a NIC never sees the same locator twice
  nic.state.local_address = ap->wlan_id + "." + std::to_string(++next_address_);
  engine_.log(log_entity(id), "nic-up",
              Detail().add("ap", ap_id).add("addr", *nic.state.local_address).str());
  if (observer_) observer_->on_nic_up(id, ap_id, *nic.state.local_address);
}

void LinkLayer::transmit(NicId id, const Datagram& dgram, bool wants_upstream) {
  Nic& nic = nics_.at(id);
  if (nic.state.phase != NicPhase::Up)
    throw std::logic_error("transmit on non-Up NIC " + std::to_string(id));

  const AccessPoint* ap = world_.find_ap(*nic.state.associated_ap);
  SimTime tx = engine_.now();
  SimTime rx = tx + sim_seconds(params_.frame_tx_latency);
  bool reaches_ap = world_.covered_at(tx, *ap) && world_.covered_at(rx, *ap);

  bool probe = dgram.kind == PayloadKind::Probe;
  std::string detail = Detail()
                           .add("flow", static_cast<std::uint64_t>(dgram.flow_id))
                           .add("seq", dgram.seq)
                           .add("nic", static_cast<std::int64_t>(id))
                           .add("tx", tx.us())
                           .str();
  engine_.log(node_entity_, probe ? "probe" : "send", detail);

  std::uint64_t frame_id = next_frame_id_++;
  PendingFrame pf;
  pf.frame = Frame{id, ap->id, dgram, tx};
  pf.frame.payload.hop_trace.push_back(log_entity(id));

  if (reaches_ap) {
    pf.ack_event = engine_.schedule_logged(
        tx + sim_seconds(2 * params_.frame_tx_latency), log_entity(id),
        probe ? "probe-ack" : "ack", detail, [this, id, frame_id](Engine&) {
          Nic& n = nics_.at(id);
          auto it = n.pending.find(frame_id);
          if (it == n.pending.end()) return;
          Frame frame = std::move(it->second.frame);
          n.pending.erase(it);
          if (observer_)
            observer_->on_tx_result(id, frame.payload, TxOutcome::AckReceived,
                                    frame.tx_time);
        });
    if (wants_upstream && upstream_) {
      pf.upstream_event =
          engine_.schedule(rx, [this, id, frame_id](Engine& e) {
            Nic& n = nics_.at(id);
            auto it = n.pending.find(frame_id);
            if (it == n.pending.end()) return;
            it->second.upstream_event = EventHandle{};
            Datagram d = it->second.frame.payload;
            const AccessPoint* via = world_.find_ap(it->second.frame.dst);
            d.hop_trace.push_back(via->id);
            upstream_(d, *via, e.now());
          });
    }
  } else {
    engine_.schedule_logged(
        tx + sim_seconds(params_.ack_timeout), log_entity(id),
        probe ? "probe-timeout" : "timeout", detail,
        [this, id, frame_id](Engine&) {
          Nic& n = nics_.at(id);
          auto it = n.pending.find(frame_id);
          if (it == n.pending.end()) return;
          Frame frame = std::move(it->second.frame);
          n.pending.erase(it);
          if (observer_)
            observer_->on_tx_result(id, frame.payload, TxOutcome::AckTimeout,
                                    frame.tx_time);
        });
  }
  nic.pending.emplace(frame_id, std::move(pf));
}

void LinkLayer::link_down(NicId id) {
  Nic& nic = nics_.at(id);
  ++nic.generation;

  // in-flight frames lose their ack and resolve as timeouts
  for (auto& [frame_id, pf] : nic.pending) {
    if (pf.ack_event.valid() && engine_.cancel(pf.ack_event)) {
      pf.ack_event = EventHandle{};
      bool probe = pf.frame.payload.kind == PayloadKind::Probe;
      std::string detail =
          Detail()
              .add("flow", static_cast<std::uint64_t>(pf.frame.payload.flow_id))
              .add("seq", pf.frame.payload.seq)
              .add("nic", static_cast<std::int64_t>(id))
              .add("tx", pf.frame.tx_time.us())
              .str();
      std::uint64_t fid = frame_id;
      engine_.schedule_logged(
          pf.frame.tx_time + sim_seconds(params_.ack_timeout), log_entity(id),
          probe ? "probe-timeout" : "timeout", detail,
          [this, id, fid](Engine&) {
            Nic& n = nics_.at(id);
            auto it = n.pending.find(fid);
            if (it == n.pending.end()) return;
            Frame frame = std::move(it->second.frame);
            n.pending.erase(it);
            if (observer_)
              observer_->on_tx_result(id, frame.payload, TxOutcome::AckTimeout,
                                      frame.tx_time);
          });
    }
    if (cancel_upstream_on_down_ && pf.upstream_event.valid()) {
      engine_.cancel(pf.upstream_event);
      pf.upstream_event = EventHandle{};
    }
  }

  switch (nic.state.phase) {
    case NicPhase::Associating:
    case NicPhase::Configuring:
      engine_.log(log_entity(id), "assoc-abort",
                  Detail()
                      .add("ap", nic.state.pending_ap ? *nic.state.pending_ap
                                                      : *nic.state.associated_ap)
                      .str());
      break;
    case NicPhase::Up:
      engine_.log(log_entity(id), "nic-down",
                  Detail().add("ap", *nic.state.associated_ap).str());
      break;
    default:
      break;
  }
  bool was_up = nic.state.phase == NicPhase::Up;
  nic.state.phase = nic.admin_down ? NicPhase::Down : NicPhase::Scanning;
  nic.state.associated_ap.reset();
  nic.state.pending_ap.reset();
  nic.state.local_address.reset();
  if (was_up && observer_) observer_->on_nic_down(id);
}

void LinkLayer::retarget(NicId id, const std::string& ap_id) {
  link_down(id);
  associate(id, ap_id);
}

void LinkLayer::set_admin_down(NicId id, bool down) {
  Nic& nic = nics_.at(id);
  nic.admin_down = down;
  if (down) {
    link_down(id);
  } else if (nic.state.phase == NicPhase::Down) {
    nic.state.phase = NicPhase::Scanning;
  }
}

}  // namespace shire
