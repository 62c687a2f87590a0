#include "shire/adhoc.hpp"

#include <algorithm>

namespace shire {

BroadcastArea BroadcastArea::circle(Point2D center, double radius) {
  BroadcastArea a;
  a.shape = Shape::Circle;
  a.center = center;
  a.radius = radius;
  return a;
}

BroadcastArea BroadcastArea::rect(Point2D min, Point2D max) {
  BroadcastArea a;
  a.shape = Shape::Rect;
  a.min = min;
  a.max = max;
  return a;
}

bool BroadcastArea::contains(Point2D p) const {
  if (shape == Shape::Circle) return distance(p, center) <= radius;
  return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
}

double forward_delay(double distance_m, const BackoffParams& params) {
  if (distance_m >= params.nominal_range) return 0.0;
  if (distance_m < 0) distance_m = 0;
  return params.t_max * (1.0 - distance_m / params.nominal_range);
}

AdhocNet::AdhocNet(Engine& engine, std::vector<Point2D> nodes,
                   AdhocParams params, std::vector<Obstacle> obstacles)
    : engine_(engine), params_(params), obstacles_(std::move(obstacles)) {
  nodes_.resize(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) nodes_[i].pos = nodes[i];
}

std::vector<int> AdhocNet::neighbors(int node) const {
  std::vector<int> out;
  Point2D p = nodes_.at(node).pos;
  for (int j = 0; j < node_count(); ++j) {
    if (j == node) continue;
    Point2D q = nodes_[j].pos;
    if (distance(p, q) <= params_.radio_range &&
        !segment_blocked(p, q, obstacles_))
      out.push_back(j);
  }
  return out;
}

void AdhocNet::originate(int origin_node, BroadcastMessage msg) {
  Node& n = nodes_.at(origin_node);
  Seen& s = n.seen[msg.msg_id];
  s.delivered = true;
  s.forwarded = true;  // the origin's transmission is its one send
  ++delivered_count_[msg.msg_id];
  transmit(origin_node, msg);
}

bool AdhocNet::reaches(int a, int b) const {
  Point2D pa = nodes_.at(a).pos, pb = nodes_.at(b).pos;
  return distance(pa, pb) <= params_.radio_range &&
         !segment_blocked(pa, pb, obstacles_);
}

// sender just transmitted: everything in its range now has the message
void AdhocNet::note_covered(int node, Seen& seen, int sender) {
  seen.covered.insert(sender);
  for (int nb : neighbors(node))
    if (reaches(nb, sender)) seen.covered.insert(nb);
}

void AdhocNet::transmit(int node, BroadcastMessage msg) {
  ++tx_count_[msg.msg_id];
  engine_.log("adhoc" + std::to_string(node), "bcast-tx",
              Detail()
                  .add("msg", msg.msg_id)
                  .add("ttl", static_cast<std::int64_t>(msg.ttl))
                  .str());
  for (int nb : neighbors(node)) {
    engine_.schedule(engine_.now() + sim_seconds(params_.frame_latency),
                     [this, nb, node, msg](Engine&) { receive(nb, node, msg); });
  }
}

void AdhocNet::receive(int node, int from, BroadcastMessage msg) {
  Node& n = nodes_.at(node);
  auto it = n.seen.find(msg.msg_id);
  if (it != n.seen.end()) {
    // duplicate: stand down once the overheard relays cover all neighbors
    Seen& s = it->second;
    note_covered(node, s, from);
    if (s.pending_forward.valid()) {
      bool all_covered = true;
      for (int nb : neighbors(node))
        if (!s.covered.count(nb)) all_covered = false;
      if (all_covered && engine_.cancel(s.pending_forward)) {
        s.pending_forward = EventHandle{};
        engine_.log("adhoc" + std::to_string(node), "bcast-suppress",
                    Detail().add("msg", msg.msg_id).str());
      }
    }
    return;
  }

  Seen& s = n.seen[msg.msg_id];
  s.delivered = true;
  ++delivered_count_[msg.msg_id];
  engine_.log("adhoc" + std::to_string(node), "bcast-deliver",
              Detail().add("msg", msg.msg_id).str());
  s.covered.insert(from);

  if (msg.ttl <= 0) return;
  if (msg.area && !msg.area->contains(n.pos)) return;

  // nothing to add when the transmitter is the only neighbor
  std::vector<int> nbs = neighbors(node);
  if (nbs.size() == 1 && nbs[0] == from) return;

  double delay =
      forward_delay(distance(n.pos, nodes_.at(from).pos), params_.backoff);
  BroadcastMessage fwd = msg;
  fwd.ttl -= 1;
  s.pending_forward = engine_.schedule(
      engine_.now() + sim_seconds(delay), [this, node, fwd](Engine&) {
        Seen& sn = nodes_.at(node).seen.at(fwd.msg_id);
        sn.pending_forward = EventHandle{};
        if (sn.forwarded) return;
        sn.forwarded = true;
        transmit(node, fwd);
      });
}

bool AdhocNet::delivered(int node, std::uint64_t msg_id) const {
  auto it = nodes_.at(node).seen.find(msg_id);
  return it != nodes_.at(node).seen.end() && it->second.delivered;
}

int AdhocNet::delivered_count(std::uint64_t msg_id) const {
  auto it = delivered_count_.find(msg_id);
  return it == delivered_count_.end() ? 0 : it->second;
}

int AdhocNet::transmissions(std::uint64_t msg_id) const {
  auto it = tx_count_.find(msg_id);
  return it == tx_count_.end() ? 0 : it->second;
}

std::optional<int> AdhocNet::greedy_next_hop(int node, Point2D gateway) const {
  double own = distance(nodes_.at(node).pos, gateway);
  std::optional<int> best;
  double best_d = own;
  for (int nb : neighbors(node)) {
    double d = distance(nodes_.at(nb).pos, gateway);
    if (d < best_d) {
      best = nb;
      best_d = d;
    }
  }
  return best;
}

std::optional<std::vector<int>> AdhocNet::relay_to_gateway(
    int from, Point2D gateway, double capture_radius) const {
  std::vector<int> hops{from};
  int cur = from;
  while (distance(nodes_.at(cur).pos, gateway) > capture_radius) {
    auto next = greedy_next_hop(cur, gateway);
    if (!next) return std::nullopt;  // greedy local minimum, no recovery mode
    cur = *next;
    hops.push_back(cur);
  }
  return hops;
}

}  // namespace shire
