#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>

#include "shire/engine.hpp"
#include "shire/rng.hpp"

namespace shire::oracles {

namespace {

// deliberately separate from shire::point_in_polygon
bool ray_cast_inside(Point2D p, const Polygon& poly) {
  const auto& v = poly.vertices;
  std::size_t n = v.size();
  int crossings = 0;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if ((v[i].y > p.y) != (v[j].y > p.y)) {
      double xi =
          v[i].x + (p.y - v[i].y) / (v[j].y - v[i].y) * (v[j].x - v[i].x);
      if (p.x < xi) ++crossings;
    }
  }
  return crossings % 2 == 1;
}

double brute_edge_distance(Point2D p, const Polygon& poly) {
  const auto& v = poly.vertices;
  std::size_t n = v.size();
  double best = 1e300;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    Point2D a = v[j], b = v[i];
    double vx = b.x - a.x, vy = b.y - a.y;
    double len2 = vx * vx + vy * vy;
    double t = len2 == 0 ? 0 : ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2;
    t = std::clamp(t, 0.0, 1.0);
    double dx = p.x - (a.x + t * vx), dy = p.y - (a.y + t * vy);
    best = std::min(best, std::hypot(dx, dy));
  }
  return best;
}

double point_seg_dist(Point2D p, Point2D a, Point2D b) {
  double vx = b.x - a.x, vy = b.y - a.y;
  double len2 = vx * vx + vy * vy;
  double t = len2 == 0 ? 0 : ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

double orient(Point2D o, Point2D a, Point2D b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// exact distance from the segment to the polygon boundary; 0 for crossings
double segment_boundary_distance(Point2D a, Point2D b, const Polygon& poly) {
  const auto& v = poly.vertices;
  std::size_t n = v.size();
  double best = 1e300;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    Point2D c = v[j], d = v[i];
    double d1 = orient(c, d, a), d2 = orient(c, d, b);
    double d3 = orient(a, b, c), d4 = orient(a, b, d);
    if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0))) return 0;
    best = std::min({best, point_seg_dist(a, c, d), point_seg_dist(b, c, d),
                     point_seg_dist(c, a, b), point_seg_dist(d, a, b)});
  }
  return best;
}

}  // namespace

bool segment_blocked_brute(Point2D a, Point2D b, const Polygon& poly,
                           int samples) {
  for (int i = 0; i <= samples; ++i) {
    double f = static_cast<double>(i) / samples;
    Point2D p{a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)};
    if (ray_cast_inside(p, poly)) return true;
    if (brute_edge_distance(p, poly) <= kGeomEps) return true;
  }
  return false;
}

OracleReport polygon_containment_oracle(const Polygon& obstacle,
                                        int segment_count,
                                        std::uint64_t seed) {
  OracleReport report;
  report.check = "polygon-containment";
  if (obstacle.vertices.empty()) return report;

  double min_x = 1e300, max_x = -1e300, min_y = 1e300, max_y = -1e300;
  for (const Point2D& v : obstacle.vertices) {
    min_x = std::min(min_x, v.x);
    max_x = std::max(max_x, v.x);
    min_y = std::min(min_y, v.y);
    max_y = std::max(max_y, v.y);
  }
  double pad_x = (max_x - min_x) + 1.0, pad_y = (max_y - min_y) + 1.0;

  RngStream rng(seed, "containment-oracle");
  for (int i = 0; i < segment_count; ++i) {
    Point2D a{rng.uniform(min_x - pad_x, max_x + pad_x),
              rng.uniform(min_y - pad_y, max_y + pad_y)};
    Point2D b{rng.uniform(min_x - pad_x, max_x + pad_x),
              rng.uniform(min_y - pad_y, max_y + pad_y)};
    ++report.instances;
    bool fast = segment_intersects_polygon(a, b, obstacle);
    bool brute = segment_blocked_brute(a, b, obstacle, 2000);
    if (fast != brute &&
        segment_boundary_distance(a, b, obstacle) <= 1e-7) {
      // grazing the boundary within the tolerance band: point sampling
      // cannot decide these, and both answers are acceptable
      continue;
    }
    if (fast != brute) {
      ++report.mismatches;
      if (report.first_counterexample.empty()) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "(%.9g,%.9g)-(%.9g,%.9g) fast=%d brute=%d", a.x, a.y,
                      b.x, b.y, fast, brute);
        report.first_counterexample = buf;
      }
    }
  }
  return report;
}

BroadcastOutcome enumerate_broadcast(const std::vector<Point2D>& nodes,
                                     int origin, const BroadcastMessage& msg,
                                     const AdhocParams& params) {
  struct Ev {
    std::int64_t t_us;
    std::uint64_t seq;
    enum { Tx, Rx } what;
    int node;
    int from;
    int ttl;
    bool cancelled = false;
  };
  std::deque<Ev> events;
  std::uint64_t seq = 0;
  auto push = [&](std::int64_t t, int what, int node, int from, int ttl) {
    events.push_back({t, seq++, what == 0 ? Ev::Tx : Ev::Rx, node, from, ttl});
    return events.size() - 1;
  };

  int n = static_cast<int>(nodes.size());
  auto in_range = [&](int a, int b) {
    return distance(nodes[a], nodes[b]) <= params.radio_range;
  };
  std::vector<bool> delivered(n, false);
  std::vector<std::ptrdiff_t> pending(n, -1);  // index of scheduled Tx event
  std::vector<std::set<int>> covered(n);
  int transmissions = 0;

  delivered[origin] = true;
  push(0, 0, origin, origin, msg.ttl);

  auto next_event = [&]() -> std::ptrdiff_t {
    std::ptrdiff_t best = -1;
    for (std::size_t i = 0; i < events.size(); ++i) {
      if (events[i].cancelled) continue;
      if (best < 0 || events[i].t_us < events[best].t_us ||
          (events[i].t_us == events[best].t_us &&
           events[i].seq < events[best].seq))
        best = static_cast<std::ptrdiff_t>(i);
    }
    return best;
  };

  auto note_covered = [&](int node, int sender) {
    covered[node].insert(sender);
    for (int j = 0; j < n; ++j)
      if (j != node && in_range(node, j) && in_range(j, sender))
        covered[node].insert(j);
  };

  std::int64_t frame_us = static_cast<std::int64_t>(
      std::llround(params.frame_latency * 1e6));
  while (true) {
    std::ptrdiff_t idx = next_event();
    if (idx < 0) break;
    Ev ev = events[idx];
    events[idx].cancelled = true;  // consumed
    if (ev.what == Ev::Tx) {
      ++transmissions;
      if (pending[ev.node] >= 0) pending[ev.node] = -1;
      for (int j = 0; j < n; ++j) {
        if (j == ev.node) continue;
        if (in_range(ev.node, j)) push(ev.t_us + frame_us, 1, j, ev.node, ev.ttl);
      }
    } else {
      int node = ev.node;
      if (delivered[node]) {
        note_covered(node, ev.from);
        if (pending[node] >= 0) {
          bool all = true;
          for (int j = 0; j < n; ++j)
            if (j != node && in_range(node, j) && !covered[node].count(j))
              all = false;
          if (all) {
            events[pending[node]].cancelled = true;  // suppression
            pending[node] = -1;
          }
        }
        continue;
      }
      delivered[node] = true;
      covered[node].insert(ev.from);
      if (ev.ttl <= 0) continue;
      if (msg.area && !msg.area->contains(nodes[node])) continue;
      int degree = 0;
      for (int j = 0; j < n; ++j)
        if (j != node && in_range(node, j)) ++degree;
      if (degree == 1) continue;  // the transmitter is the only neighbor
      double delay = forward_delay(distance(nodes[node], nodes[ev.from]),
                                   params.backoff);
      std::int64_t t_fwd =
          ev.t_us + static_cast<std::int64_t>(std::llround(delay * 1e6));
      pending[node] = static_cast<std::ptrdiff_t>(
          push(t_fwd, 0, node, node, ev.ttl - 1));
    }
  }
  return {delivered, transmissions};
}

OracleReport broadcast_enumeration_oracle(const std::vector<Point2D>& nodes,
                                          int origin,
                                          const BroadcastMessage& msg,
                                          const AdhocParams& params) {
  OracleReport report;
  report.check = "broadcast-enumeration";
  report.instances = 1;

  BroadcastOutcome expected = enumerate_broadcast(nodes, origin, msg, params);

  Engine engine;
  AdhocNet net(engine, nodes, params);
  net.originate(origin, msg);
  engine.run_until(sim_seconds(60.0));

  BroadcastOutcome actual;
  actual.transmissions = net.transmissions(msg.msg_id);
  actual.delivered.resize(nodes.size());
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
    actual.delivered[i] = net.delivered(i, msg.msg_id);

  if (!(actual == expected)) {
    report.mismatches = 1;
    char buf[128];
    std::snprintf(buf, sizeof buf, "tx sim=%d enum=%d", actual.transmissions,
                  expected.transmissions);
    report.first_counterexample = buf;
  }
  return report;
}

}  // namespace shire::oracles
