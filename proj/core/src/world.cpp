#include "shire/world.hpp"

#include <algorithm>
#include <cmath>

namespace shire {

double WaypointPath::segment_speed(std::size_t segment) const {
  if (segment < segment_speeds.size()) return segment_speeds[segment];
  return speed;
}

double WaypointPath::duration_seconds() const {
  double t = 0;
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i)
    t += distance(waypoints[i], waypoints[i + 1]) / segment_speed(i);
  return t;
}

Point2D WaypointPath::position_at_seconds(double t) const {
  if (waypoints.empty()) return {};
  if (t <= 0) return waypoints.front();
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
    double len = distance(waypoints[i], waypoints[i + 1]);
    double dt = len / segment_speed(i);
    if (t < dt) {
      double f = (dt == 0) ? 1.0 : t / dt;
      return {waypoints[i].x + f * (waypoints[i + 1].x - waypoints[i].x),
              waypoints[i].y + f * (waypoints[i + 1].y - waypoints[i].y)};
    }
    t -= dt;
  }
  return waypoints.back();
}

bool segment_blocked(Point2D a, Point2D b,
                     const std::vector<Obstacle>& obstacles) {
  for (const Obstacle& o : obstacles)
    if (segment_intersects_polygon(a, b, o)) return true;
  return false;
}

const AccessPoint* World::find_ap(const std::string& id) const {
  for (const AccessPoint& ap : aps)
    if (ap.id == id) return &ap;
  return nullptr;
}

bool World::covered(Point2D p, const AccessPoint& ap) const {
  double dx = p.x - ap.position.x, dy = p.y - ap.position.y;
  if (dx * dx + dy * dy > ap.range * ap.range) return false;
  return !segment_blocked(p, ap.position, obstacles);
}

bool World::covered_at(SimTime t, const AccessPoint& ap) const {
  return covered(path.position_at(t), ap);
}

std::vector<std::string> World::covered_aps(SimTime t) const {
  std::vector<std::string> out;
  Point2D p = path.position_at(t);
  for (const AccessPoint& ap : aps)
    if (covered(p, ap)) out.push_back(ap.id);
  return out;
}

std::vector<CoverageSample> coverage_timeline(const World& world, SimTime dt,
                                              SimTime t_end) {
  std::vector<CoverageSample> out;
  for (std::int64_t t = 0;; t += dt.us()) {
    bool last = t >= t_end.us();
    SimTime st = SimTime::from_us(last ? t_end.us() : t);
    out.push_back({st, world.covered_aps(st)});
    if (last) break;
  }
  return out;
}

std::vector<CoverageTransition> coverage_transitions(const World& world,
                                                     SimTime dt,
                                                     SimTime refine,
                                                     SimTime t_end) {
  std::vector<CoverageTransition> out;
  for (const AccessPoint& ap : world.aps) {
    bool prev = world.covered_at(SimTime::from_us(0), ap);
    for (std::int64_t t = dt.us(); t - dt.us() < t_end.us(); t += dt.us()) {
      std::int64_t hi_us = std::min(t, t_end.us());
      bool cur = world.covered_at(SimTime::from_us(hi_us), ap);
      if (cur != prev) {
        // bisect: lo keeps the old state, hi the new one
        std::int64_t lo = hi_us - dt.us(), hi = hi_us;
        while (hi - lo > refine.us()) {
          std::int64_t mid = lo + (hi - lo) / 2;
          if (world.covered_at(SimTime::from_us(mid), ap) == prev)
            lo = mid;
          else
            hi = mid;
        }
        out.push_back({SimTime::from_us(hi), ap.id, cur});
        prev = cur;
      }
      if (hi_us == t_end.us()) break;
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const CoverageTransition& a, const CoverageTransition& b) {
                     if (a.t != b.t) return a.t < b.t;
                     return a.ap < b.ap;
                   });
  return out;
}

}  // namespace shire
