#include <doctest.h>

#include <map>
#include <numeric>

#include "oracles.hpp"
#include "shire/adhoc.hpp"
#include "shire/rng.hpp"

using namespace shire;

namespace {

BroadcastMessage msg(std::uint64_t id, Point2D origin, int ttl) {
  BroadcastMessage m;
  m.msg_id = id;
  m.origin = origin;
  m.ttl = ttl;
  m.payload_len = 64;
  return m;
}

// random connected topology on a square, rejection-sampled
std::vector<Point2D> random_connected(RngStream& rng, int n, double range) {
  while (true) {
    std::vector<Point2D> pts;
    for (int i = 0; i < n; ++i)
      pts.push_back({rng.uniform(0, 300), rng.uniform(0, 300)});
    // union-find connectivity under the disc model
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
      return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (distance(pts[i], pts[j]) <= range) parent[find(i)] = find(j);
    bool connected = true;
    for (int i = 0; i < n; ++i)
      if (find(i) != find(0)) connected = false;
    if (connected) return pts;
  }
}

}  // namespace

TEST_CASE("forward_delay: linear farther-first priority") {
  BackoffParams p{0.1, 100};
  CHECK(forward_delay(100, p) == doctest::Approx(0));   // farthest, immediate
  CHECK(forward_delay(0, p) == doctest::Approx(0.1));   // at the sender, t_max
  CHECK(forward_delay(50, p) == doctest::Approx(0.05));
  CHECK(forward_delay(140, p) == doctest::Approx(0));   // beyond range clamps

  RngStream rng(3, "delay");
  for (int i = 0; i < 1000; ++i) {
    double d1 = rng.uniform(0, 100), d2 = rng.uniform(0, 100);
    if (d1 < d2) CHECK(forward_delay(d1, p) > forward_delay(d2, p));
  }
}

TEST_CASE("three-node line: one relay covers everyone") {
  Engine e;
  AdhocParams params;
  params.radio_range = 100;
  // spacing 0.9 * range: A reaches B, B reaches C, A cannot reach C
  std::vector<Point2D> nodes{{0, 0}, {90, 0}, {180, 0}};
  AdhocNet net(e, nodes, params);
  net.originate(0, msg(1, nodes[0], 8));
  e.run_until(sim_seconds(10));

  CHECK(net.delivered_count(1) == 3);
  CHECK(net.transmissions(1) == 2);  // origin + B; naive flooding would use 3

  auto oracle = oracles::broadcast_enumeration_oracle(nodes, 0, msg(1, nodes[0], 8), params);
  CHECK(oracle.pass());
}

TEST_CASE("ttl zero delivers without forwarding") {
  Engine e;
  AdhocParams params;
  std::vector<Point2D> nodes{{0, 0}, {90, 0}, {180, 0}};
  AdhocNet net(e, nodes, params);
  net.originate(0, msg(1, nodes[0], 0));
  e.run_until(sim_seconds(10));
  CHECK(net.delivered(1, 1));
  CHECK_FALSE(net.delivered(2, 1));  // B never forwarded
  CHECK(net.transmissions(1) == 1);
}

TEST_CASE("ttl decrements by exactly one per retransmission") {
  Engine e;
  AdhocParams params;
  std::vector<Point2D> nodes{{0, 0}, {90, 0}, {180, 0}, {270, 0}, {360, 0}};
  AdhocNet net(e, nodes, params);
  net.originate(0, msg(1, nodes[0], 2));  // origin + two relays
  e.run_until(sim_seconds(10));
  CHECK(net.delivered(1, 1));
  CHECK(net.delivered(2, 1));
  CHECK(net.delivered(3, 1));
  CHECK_FALSE(net.delivered(4, 1));  // out of ttl
  CHECK(net.transmissions(1) == 3);
}

TEST_CASE("messages are not forwarded outside their area of interest") {
  Engine e;
  AdhocParams params;
  std::vector<Point2D> nodes{{0, 0}, {90, 0}, {180, 0}};
  AdhocNet net(e, nodes, params);
  BroadcastMessage m = msg(1, nodes[0], 8);
  m.area = BroadcastArea::circle({0, 0}, 50);  // B at 90 is already outside
  net.originate(0, m);
  e.run_until(sim_seconds(10));
  CHECK(net.delivered(1, 1));        // delivered at the edge node
  CHECK_FALSE(net.delivered(2, 1));  // but not relayed beyond the area
  CHECK(net.transmissions(1) == 1);

  BroadcastMessage m2 = msg(2, nodes[0], 8);
  m2.area = BroadcastArea::rect({-10, -10}, {400, 10});
  net.originate(0, m2);
  e.run_until(sim_seconds(20));
  CHECK(net.delivered_count(2) == 3);
}

TEST_CASE("fully connected clique: exactly one forwarder beyond the origin") {
  Engine e;
  AdhocParams params;
  params.radio_range = 300;
  std::vector<Point2D> nodes{{0, 0}, {40, 0}, {80, 10}, {20, 60}};
  AdhocNet net(e, nodes, params);
  net.originate(0, msg(1, nodes[0], 8));
  e.run_until(sim_seconds(10));
  CHECK(net.delivered_count(1) == 4);
  CHECK(net.transmissions(1) == 2);  // origin plus the farthest receiver

  auto oracle = oracles::broadcast_enumeration_oracle(nodes, 0, msg(1, nodes[0], 8), params);
  CHECK(oracle.pass());
}

TEST_CASE("suppression: the farthest mutually-ranged receiver forwards") {
  Engine e;
  AdhocParams params;
  params.radio_range = 120;
  params.backoff.nominal_range = 120;
  // receivers at 50 and 100 from the origin, in range of each other
  std::vector<Point2D> nodes{{0, 0}, {50, 0}, {100, 0}};
  AdhocNet net(e, nodes, params);
  net.originate(0, msg(1, nodes[0], 8));
  e.run_until(sim_seconds(10));
  CHECK(net.transmissions(1) == 2);

  bool far_tx = false, near_suppressed = false;
  for (const LogRecord& r : e.event_log().records()) {
    if (r.kind == "bcast-tx" && r.entity == "adhoc2") far_tx = true;
    if (r.kind == "bcast-suppress" && r.entity == "adhoc1") near_suppressed = true;
  }
  CHECK(far_tx);
  CHECK(near_suppressed);
}

TEST_CASE("each node retransmits a message at most once") {
  Engine e;
  AdhocParams params;
  params.radio_range = 130;
  RngStream rng(17, "dup-guard");
  std::vector<Point2D> nodes = random_connected(rng, 12, 130);
  AdhocNet net(e, nodes, params);
  net.originate(0, msg(1, nodes[0], 20));
  e.run_until(sim_seconds(30));

  std::map<std::string, int> tx_per_node;
  for (const LogRecord& r : e.event_log().records())
    if (r.kind == "bcast-tx") tx_per_node[r.entity] += 1;
  for (auto& [node, n] : tx_per_node) CHECK(n == 1);
  CHECK(net.delivered_count(1) == 12);
}

TEST_CASE("random connected topologies: full delivery, fewer tx than flooding") {
  RngStream rng(23, "topologies");
  for (int trial = 0; trial < 20; ++trial) {
    int n = 3 + static_cast<int>(rng.below(13));
    std::vector<Point2D> nodes = random_connected(rng, n, 120);
    Engine e;
    AdhocParams params;
    params.radio_range = 120;
    params.backoff.nominal_range = 120;
    AdhocNet net(e, nodes, params);
    net.originate(0, msg(1, nodes[0], n));
    e.run_until(sim_seconds(60));
    CHECK(net.delivered_count(1) == n);
    CHECK(net.transmissions(1) <= n);  // bounded flooding, always
    bool has_triangle = false;
    for (int i = 0; i < n && !has_triangle; ++i)
      for (int j = i + 1; j < n && !has_triangle; ++j)
        for (int k = j + 1; k < n && !has_triangle; ++k)
          if (distance(nodes[i], nodes[j]) <= 120 &&
              distance(nodes[j], nodes[k]) <= 120 &&
              distance(nodes[i], nodes[k]) <= 120)
            has_triangle = true;
    if (has_triangle) CHECK(net.transmissions(1) < n);
  }
}

TEST_CASE("no transmission happens outside the area plus one radio range") {
  Engine e;
  AdhocParams params;
  params.radio_range = 100;
  std::vector<Point2D> nodes;
  for (int i = 0; i < 10; ++i) nodes.push_back({i * 90.0, 0});
  AdhocNet net(e, nodes, params);
  BroadcastMessage m = msg(1, nodes[0], 20);
  m.area = BroadcastArea::circle({0, 0}, 200);
  net.originate(0, m);
  e.run_until(sim_seconds(30));
  for (const LogRecord& r : e.event_log().records()) {
    if (r.kind != "bcast-tx") continue;
    int node = std::stoi(r.entity.substr(5));
    CHECK(distance(net.position(node), {0, 0}) <=
          200 + params.radio_range + 1e-9);
  }
}

TEST_CASE("greedy relay picks the neighbor closest to the gateway") {
  Engine e;
  AdhocParams params;
  params.radio_range = 100;
  Point2D gateway{300, 0};

  SUBCASE("a neighbor at the gateway position wins") {
    AdhocNet net(e, {{220, 0}, {300, 0}, {250, 40}}, params);
    CHECK(net.greedy_next_hop(0, gateway) == 1);
  }
  SUBCASE("all neighbors farther than self: no route") {
    AdhocNet net(e, {{200, 0}, {150, 0}, {180, 60}}, params);
    CHECK_FALSE(net.greedy_next_hop(0, gateway).has_value());
  }
  SUBCASE("chain reaches the gateway in chain-length hops") {
    std::vector<Point2D> chain;
    for (int i = 0; i < 6; ++i) chain.push_back({i * 90.0, 0});
    AdhocNet net(e, chain, params);
    auto hops = net.relay_to_gateway(0, {450, 0}, 1.0);
    REQUIRE(hops.has_value());
    CHECK(hops->size() == 6);  // n0 .. n5
    CHECK(hops->back() == 5);
  }
  SUBCASE("an obstacle severs the chain") {
    std::vector<Obstacle> obstacles{
        Obstacle{{{130, -10}, {140, -10}, {140, 10}, {130, 10}}}};
    std::vector<Point2D> chain{{0, 0}, {90, 0}, {180, 0}};
    AdhocNet net(e, chain, params, obstacles);
    CHECK_FALSE(net.relay_to_gateway(0, {180, 0}, 1.0).has_value());
  }
}
