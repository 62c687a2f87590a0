#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "shire/engine.hpp"
#include "shire/geometry.hpp"
#include "shire/world.hpp"

namespace shire {

struct BroadcastArea {
  enum class Shape { Circle, Rect };
  Shape shape = Shape::Circle;
  Point2D center;       // circle
  double radius = 0;    // circle
  Point2D min, max;     // rect corners

  static BroadcastArea circle(Point2D center, double radius);
  static BroadcastArea rect(Point2D min, Point2D max);
  bool contains(Point2D p) const;
};

struct BroadcastMessage {
  std::uint64_t msg_id = 0;
  Point2D origin;
  int ttl = 0;  // remaining retransmissions; each forward decrements by 1
  std::optional<BroadcastArea> area;
  std::uint32_t payload_len = 0;
};

struct BackoffParams {
  double t_max = 0.1;          // seconds
  double nominal_range = 100;  // meters
};

// Farther receivers wait less before forwarding: t_max * (1 - d / range),
// clamped to zero beyond the nominal range.
double forward_delay(double distance_m, const BackoffParams& params);

struct AdhocParams {
  double radio_range = 100;   // meters, disc model
  double frame_latency = 0.001;  // transmit -> all neighbors receive
  BackoffParams backoff;
};

// Static ad-hoc network running priority-based broadcast, plus a greedy
// geographic relay toward a gateway position.
//
// Suppression rule: a receiver schedules its retransmission after
// forward_delay and stands down once the transmissions it overhears have
// reached every one of its neighbors. A node whose only neighbor is the
// transmitter itself has nobody new to reach and never forwards. This keeps
// redundant transmissions down without ever cutting off a hidden branch.
class AdhocNet {
 public:
  AdhocNet(Engine& engine, std::vector<Point2D> nodes, AdhocParams params,
           std::vector<Obstacle> obstacles = {});

  int node_count() const { return static_cast<int>(nodes_.size()); }
  Point2D position(int node) const { return nodes_.at(node).pos; }

  // in range and unblocked
  std::vector<int> neighbors(int node) const;

  // Injects the message at `origin_node`, which transmits immediately.
  void originate(int origin_node, BroadcastMessage msg);

  bool delivered(int node, std::uint64_t msg_id) const;
  int delivered_count(std::uint64_t msg_id) const;
  int transmissions(std::uint64_t msg_id) const;

  // Neighbor strictly closer to the gateway, minimizing remaining distance;
  // nullopt when greedy forwarding is stuck.
  std::optional<int> greedy_next_hop(int node, Point2D gateway) const;

  // Hop-by-hop greedy relay until some node lies within capture_radius of
  // the gateway. Returns the node sequence including the start, or nullopt.
  std::optional<std::vector<int>> relay_to_gateway(int from, Point2D gateway,
                                                   double capture_radius) const;

 private:
  struct Seen {
    bool delivered = false;
    bool forwarded = false;
    EventHandle pending_forward;
    std::set<int> covered;  // neighbors already reached by overheard tx
  };
  struct Node {
    Point2D pos;
    std::map<std::uint64_t, Seen> seen;
  };

  bool reaches(int a, int b) const;
  void note_covered(int node, Seen& seen, int sender);
  void transmit(int node, BroadcastMessage msg);
  void receive(int node, int from, BroadcastMessage msg);

  Engine& engine_;
  AdhocParams params_;
  std::vector<Node> nodes_;
  std::vector<Obstacle> obstacles_;
  std::map<std::uint64_t, int> tx_count_;
  std::map<std::uint64_t, int> delivered_count_;
};

}  // namespace shire
