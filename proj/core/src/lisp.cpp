#include "shire/lisp.hpp"

namespace shire {

LispNode::LispNode(Engine& engine, LinkLayer& link, const World& world,
                   Correspondent& correspondent, LispParams params,
                   FlowId flow)
    : engine_(engine),
      link_(link),
      world_(world),
      correspondent_(correspondent),
      params_(params),
      flow_(flow),
      monitor_(link.nic_count(), params.failure_threshold) {}

void LispNode::start() {
  link_.set_observer(this);
  link_.set_cancel_upstream_on_down(true);
  link_.set_ap_policy([this](NicId, const std::vector<std::string>& covered)
                          -> std::optional<std::string> {
    Point2D pos = world_.path.position_at(engine_.now());
    std::optional<std::string> best;
    double best_d = 0;
    for (const std::string& ap_id : covered) {
      double d = distance(pos, world_.find_ap(ap_id)->position);
      if (!best || d < best_d) {
        best = ap_id;
        best_d = d;
      }
    }
    return best;
  });
  link_.set_upstream([this](const Datagram& d, const AccessPoint& via,
                            SimTime at) {
    double latency = via.wired_latency_to_internet + params_.encap_latency;
    engine_.schedule(at + sim_seconds(latency), [this, d](Engine& e) {
      correspondent_.deliver(d, e.now());
    });
  });
}

void LispNode::on_nic_up(NicId id, const std::string&,
                         const std::string& addr) {
  monitor_.on_up(id);
  cache_.endpoint_id = "flow" + std::to_string(flow_);
  cache_.locator = addr;
  cache_.valid = false;
  std::uint64_t gen = ++handover_gen_;

  engine_.schedule_logged(
      engine_.now() + sim_seconds(params_.map_request_rtt), "lisp", "lisp-map",
      "", [this, gen](Engine& e1) {
        if (gen != handover_gen_) return;
        e1.schedule_logged(
            e1.now() + sim_seconds(params_.map_cache_update_delay), "lisp",
            "lisp-cache", "", [this, gen](Engine& e2) {
              if (gen != handover_gen_) return;
              if (params_.correspondent_lisp_enabled) {
                cache_.valid = true;
                drain();
                return;
              }
              e2.schedule_logged(
                  e2.now() + sim_seconds(params_.non_lisp_config_delay), "lisp",
                  "lisp-nonlisp", "", [this, gen](Engine&) {
                    if (gen != handover_gen_) return;
                    cache_.valid = true;
                    drain();
                  });
            });
      });
}

void LispNode::on_nic_down(NicId id) {
  monitor_.on_down(id);
  ++handover_gen_;
  cache_.valid = false;
  cache_.locator.clear();
}

bool LispNode::can_transmit() const {
  return link_.nic(0).phase == NicPhase::Up && cache_.valid;
}

void LispNode::send(std::uint32_t payload_len) {
  Datagram d;
  d.flow_id = flow_;
  d.seq = next_seq_++;
  d.direction = Direction::Up;
  d.kind = PayloadKind::Data;
  d.payload_len = payload_len;
  d.payload_digest = synth_payload_digest(flow_, d.seq, payload_len);
  if (can_transmit()) {
    transmit(std::move(d));
  } else {
    std::uint64_t seq = d.seq;
    pending_.emplace(seq, std::move(d));
    ensure_retry_tick();
  }
}

void LispNode::transmit(Datagram dgram) {
  dgram.src_locator = *link_.nic(0).local_address;
  dgram.hop_trace.clear();
  link_.transmit(0, dgram, true);
}

void LispNode::drain() {
  while (!pending_.empty() && can_transmit()) {
    auto it = pending_.begin();
    Datagram d = std::move(it->second);
    pending_.erase(it);
    transmit(std::move(d));
  }
}

void LispNode::ensure_retry_tick() {
  if (retry_tick_scheduled_ || pending_.empty()) return;
  retry_tick_scheduled_ = true;
  engine_.schedule(engine_.now() + sim_seconds(params_.retry_interval),
                   [this](Engine&) {
                     retry_tick_scheduled_ = false;
                     drain();
                     ensure_retry_tick();
                   });
}

void LispNode::on_tx_result(NicId id, const Datagram& d, TxOutcome outcome,
                            SimTime) {
  if (outcome == TxOutcome::AckReceived) {
    monitor_.on_ack(id, engine_.now(), 0);
    return;
  }
  monitor_.on_timeout(id);
  if (!monitor_.usable(id) && link_.nic(id).phase == NicPhase::Up)
    link_.link_down(id);
  pending_.emplace(d.seq, d);
  ensure_retry_tick();
}

}  // namespace shire
