#include "shire/simulation.hpp"

#include <algorithm>
#include <set>

namespace shire {

Simulation::Simulation(const ScenarioConfig& cfg, Protocol protocol,
                       std::uint64_t seed)
    : cfg_(cfg), protocol_(protocol), seed_(seed), world_(cfg.world()) {
  engine_.log("run", "meta",
              Detail()
                  .add("proto", to_string(protocol))
                  .add("seed", seed)
                  .add("scenario", cfg_.name.empty() ? "unnamed" : cfg_.name)
                  .str());

  // coverage transitions become trace records so the downtime metric can
  // tell a handover from a plain coverage gap
  SimTime duration = sim_seconds(cfg_.run.duration);
  auto transitions = coverage_transitions(world_, sim_seconds(cfg_.run.dt),
                                          SimTime::from_us(1000), duration);
  std::set<std::string> covered_now;
  for (const std::string& id : world_.covered_aps(SimTime::from_us(0)))
    covered_now.insert(id);
  auto coverage_detail = [](const std::set<std::string>& s) {
    std::string aps;
    for (const std::string& id : s) {
      if (!aps.empty()) aps += ';';
      aps += id;
    }
    return Detail().add("aps", aps).str();
  };
  engine_.log("world", "coverage", coverage_detail(covered_now));
  for (const CoverageTransition& tr : transitions) {
    if (tr.up)
      covered_now.insert(tr.ap);
    else
      covered_now.erase(tr.ap);
    engine_.schedule_logged(tr.t, "world", "coverage",
                            coverage_detail(covered_now), {});
  }

  int nic_count = protocol_ == Protocol::Abps ? 2 : 1;
  link_ = std::make_unique<LinkLayer>(engine_, world_, cfg_.link, nic_count,
                                      "node");
  correspondent_ = std::make_unique<Correspondent>(engine_);

  switch (protocol_) {
    case Protocol::Abps: {
      proxy_ = std::make_unique<ProxyServer>(
          engine_, *correspondent_,
          cfg_.abps.proxy_to_correspondent_latency, cfg_.abps.seq_window);
      proxy_->register_flow(kFlow, cfg_.abps.auth_key);
      abps_ = std::make_unique<ProxyClient>(engine_, *link_, world_, cfg_.abps,
                                            kFlow);
      double wired_one_way = cfg_.link.wired_rtt_to_proxy / 2;
      link_->set_upstream([this, wired_one_way](const Datagram& d,
                                                const AccessPoint&,
                                                SimTime at) {
        engine_.schedule(at + sim_seconds(wired_one_way),
                         [this, d](Engine& e) { proxy_->receive(d, e.now()); });
      });
      abps_->start();
      break;
    }
    case Protocol::Mipv6:
      mipv6_ = std::make_unique<Mipv6Node>(
          engine_, *link_, world_, *correspondent_, cfg_.mipv6, kFlow,
          RngStream(seed_, "mipv6"));
      mipv6_->start();
      break;
    case Protocol::Lisp:
      lisp_ = std::make_unique<LispNode>(engine_, *link_, world_,
                                         *correspondent_, cfg_.lisp, kFlow);
      lisp_->start();
      break;
  }

  link_->start();
  engine_.schedule(sim_seconds(cfg_.traffic.interval),
                   [this](Engine& e) { traffic_tick(e); });
}

Simulation::~Simulation() = default;

void Simulation::traffic_tick(Engine& e) {
  switch (protocol_) {
    case Protocol::Abps: abps_->send(cfg_.traffic.payload_len); break;
    case Protocol::Mipv6: mipv6_->send(cfg_.traffic.payload_len); break;
    case Protocol::Lisp: lisp_->send(cfg_.traffic.payload_len); break;
  }
  SimTime next = e.now() + sim_seconds(cfg_.traffic.interval);
  if (next <= sim_seconds(cfg_.run.duration))
    e.schedule(next, [this](Engine& en) { traffic_tick(en); });
}

RunResult Simulation::run() {
  engine_.run_until(sim_seconds(cfg_.run.duration));
  RunResult result;
  result.downtime = downtime_online(engine_.event_log());
  result.deliveries = correspondent_->total();
  if (abps_) {
    result.retransmissions = abps_->retransmissions();
    result.relayed = proxy_->relayed();
    result.dup_dropped = proxy_->dup_dropped();
    result.auth_rejected = proxy_->auth_rejected();
  }
  result.log = engine_.take_log();
  return result;
}

}  // namespace shire
