// Test-only oracle implementations, kept independent of the code paths they
// check: brute-force geometry via dense sampling, and a standalone replay of
// the priority-broadcast schedule for small topologies.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shire/adhoc.hpp"
#include "shire/geometry.hpp"

namespace shire::oracles {

struct OracleReport {
  std::string check;
  int instances = 0;
  int mismatches = 0;
  std::string first_counterexample;
  bool pass() const { return mismatches == 0; }
};

// Blocked iff any of `samples` points along a-b lies inside the polygon
// (independent ray caster) or within eps of an edge.
bool segment_blocked_brute(Point2D a, Point2D b, const Polygon& poly,
                           int samples = 10000);

// Random segments around the obstacle, brute force against
// segment_intersects_polygon.
OracleReport polygon_containment_oracle(const Polygon& obstacle,
                                        int segment_count, std::uint64_t seed);

struct BroadcastOutcome {
  std::vector<bool> delivered;
  int transmissions = 0;
  friend bool operator==(const BroadcastOutcome&, const BroadcastOutcome&) = default;
};

// Replays the unique schedule implied by the forward delays without using
// the simulation engine. Collision-free assumption, <= 6 nodes by contract.
BroadcastOutcome enumerate_broadcast(const std::vector<Point2D>& nodes,
                                     int origin, const BroadcastMessage& msg,
                                     const AdhocParams& params);

// Runs the simulator on the same topology and compares.
OracleReport broadcast_enumeration_oracle(const std::vector<Point2D>& nodes,
                                          int origin,
                                          const BroadcastMessage& msg,
                                          const AdhocParams& params);

}  // namespace shire::oracles
