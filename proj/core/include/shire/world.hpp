#pragma once

#include <string>
#include <vector>

#include "shire/geometry.hpp"
#include "shire/time.hpp"

namespace shire {

using Obstacle = Polygon;

// One access point; every AP is its own WLAN, so re-associating always
// means a fresh address.
struct AccessPoint {
  std::string id;
  Point2D position;
  double range = 0;  // meters
  std::string wlan_id;
  double wired_latency_to_internet = 0.010;  // seconds, one way
  friend bool operator==(const AccessPoint&, const AccessPoint&) = default;
};

// Piecewise-linear motion at constant speed, with optional per-segment
// speed overrides. The node parks at the last waypoint once done.
struct WaypointPath {
  std::vector<Point2D> waypoints;
  double speed = 1.0;  // m/s
  std::vector<double> segment_speeds;  // empty, or one entry per segment

  double segment_speed(std::size_t segment) const;
  double duration_seconds() const;
  Point2D position_at_seconds(double t) const;
  Point2D position_at(SimTime t) const { return position_at_seconds(t.seconds()); }

  friend bool operator==(const WaypointPath&, const WaypointPath&) = default;
};

bool segment_blocked(Point2D a, Point2D b,
                     const std::vector<Obstacle>& obstacles);

struct World {
  std::vector<AccessPoint> aps;
  std::vector<Obstacle> obstacles;
  WaypointPath path;

  const AccessPoint* find_ap(const std::string& id) const;

  // Disc range plus line-of-sight: in range and not occluded.
  bool covered(Point2D p, const AccessPoint& ap) const;
  bool covered_at(SimTime t, const AccessPoint& ap) const;

  // Ids of all APs covering the node at t, in declaration order.
  std::vector<std::string> covered_aps(SimTime t) const;
};

struct CoverageSample {
  SimTime t;
  std::vector<std::string> aps;  // declaration order
  friend bool operator==(const CoverageSample&, const CoverageSample&) = default;
};

// Coverage sets sampled every dt over [0, t_end], endpoints included.
std::vector<CoverageSample> coverage_timeline(const World& world, SimTime dt,
                                              SimTime t_end);

struct CoverageTransition {
  SimTime t;
  std::string ap;
  bool up = false;
};

// Per-AP up/down instants found by dt sampling and refined by bisection to
// `refine` resolution. A flip shorter than dt can be missed; that bound is
// the accepted geometric error.
std::vector<CoverageTransition> coverage_transitions(const World& world,
                                                     SimTime dt,
                                                     SimTime refine,
                                                     SimTime t_end);

}  // namespace shire
