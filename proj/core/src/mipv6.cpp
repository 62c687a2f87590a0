#include "shire/mipv6.hpp"

namespace shire {

Mipv6Node::Mipv6Node(Engine& engine, LinkLayer& link, const World& world,
                     Correspondent& correspondent, Mipv6Params params,
                     FlowId flow, RngStream rng)
    : engine_(engine),
      link_(link),
      world_(world),
      correspondent_(correspondent),
      params_(params),
      flow_(flow),
      rng_(rng),
      monitor_(link.nic_count(), params.failure_threshold) {}

void Mipv6Node::start() {
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
    // triangular routing through the home agent until the correspondent
    // holds a binding
    double latency = via.wired_latency_to_internet;
    if (!binding_.correspondent_binding_valid)
      latency += params_.home_agent_detour_latency;
    engine_.schedule(at + sim_seconds(latency), [this, d](Engine& e) {
      correspondent_.deliver(d, e.now());
    });
  });
}

void Mipv6Node::on_nic_up(NicId id, const std::string&,
                          const std::string& addr) {
  monitor_.on_up(id);
  binding_.care_of_address = addr;
  handover_in_progress_ = true;
  std::uint64_t gen = ++handover_gen_;

  // router advertisement wait, drawn uniformly over the advertisement period
  SimTime ra_wait = sim_seconds(rng_.uniform(0, params_.router_adv_interval));
  SimTime t0 = engine_.now();
  engine_.schedule_logged(
      t0 + ra_wait, "mipv6", "mipv6-ra",
      Detail().add("wait_us", ra_wait.us()).str(), [this, gen](Engine& e1) {
        if (gen != handover_gen_) return;
        e1.schedule_logged(
            e1.now() + sim_seconds(params_.dad_delay), "mipv6", "mipv6-dad", "",
            [this, gen](Engine& e2) {
              if (gen != handover_gen_) return;
              e2.schedule_logged(
                  e2.now() + sim_seconds(params_.binding_update_rtt), "mipv6",
                  "mipv6-bu-home", "", [this, gen](Engine& e3) {
                    if (gen != handover_gen_) return;
                    binding_.home_binding_valid = true;
                    e3.schedule_logged(
                        e3.now() + sim_seconds(params_.return_routability_rtt +
                                               params_.binding_update_rtt),
                        "mipv6", "mipv6-rr-bu-cn", "", [this, gen](Engine&) {
                          if (gen != handover_gen_) return;
                          binding_.correspondent_binding_valid = true;
                          handover_in_progress_ = false;
                          drain();
                        });
                  });
            });
      });
}

void Mipv6Node::on_nic_down(NicId id) {
  monitor_.on_down(id);
  ++handover_gen_;  // aborts any in-flight control sequence
  handover_in_progress_ = false;
  binding_.care_of_address.reset();
  binding_.home_binding_valid = false;
  binding_.correspondent_binding_valid = false;
}

bool Mipv6Node::can_transmit() const {
  return link_.nic(0).phase == NicPhase::Up && !handover_in_progress_ &&
         binding_.home_binding_valid;
}

void Mipv6Node::send(std::uint32_t payload_len) {
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

void Mipv6Node::transmit(Datagram dgram) {
  dgram.src_locator = *link_.nic(0).local_address;
  dgram.hop_trace.clear();
  link_.transmit(0, dgram, true);
}

void Mipv6Node::drain() {
  while (!pending_.empty() && can_transmit()) {
    auto it = pending_.begin();
    Datagram d = std::move(it->second);
    pending_.erase(it);
    transmit(std::move(d));
  }
}

void Mipv6Node::ensure_retry_tick() {
  if (retry_tick_scheduled_ || pending_.empty()) return;
  retry_tick_scheduled_ = true;
  engine_.schedule(engine_.now() + sim_seconds(params_.retry_interval),
                   [this](Engine&) {
                     retry_tick_scheduled_ = false;
                     drain();
                     ensure_retry_tick();
                   });
}

void Mipv6Node::on_tx_result(NicId id, const Datagram& d, TxOutcome outcome,
                             SimTime) {
  if (outcome == TxOutcome::AckReceived) {
    monitor_.on_ack(id, engine_.now(), 0);
    return;
  }
  monitor_.on_timeout(id);
  if (!monitor_.usable(id) && link_.nic(id).phase == NicPhase::Up) {
    // repeated silence means the access network is gone
    link_.link_down(id);
  }
  pending_.emplace(d.seq, d);
  ensure_retry_tick();
}

}  // namespace shire
