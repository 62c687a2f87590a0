#include "shire/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace shire {

double distance(Point2D a, Point2D b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

double segment_point_distance(Point2D a, Point2D b, Point2D p) {
  double vx = b.x - a.x, vy = b.y - a.y;
  double len2 = vx * vx + vy * vy;
  if (len2 == 0.0) return distance(a, p);
  double t = ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return distance({a.x + t * vx, a.y + t * vy}, p);
}

namespace {

double cross(Point2D o, Point2D a, Point2D b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

bool point_in_polygon(Point2D p, const Polygon& poly) {
  const auto& v = poly.vertices;
  std::size_t n = v.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (segment_point_distance(v[i], v[(i + 1) % n], p) <= kGeomEps)
      return true;
  }
  // ray casting toward +x
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    bool straddles = (v[i].y > p.y) != (v[j].y > p.y);
    if (straddles) {
      double xi = v[i].x +
                  (p.y - v[i].y) / (v[j].y - v[i].y) * (v[j].x - v[i].x);
      if (p.x < xi) inside = !inside;
    }
  }
  return inside;
}

bool segments_intersect(Point2D a, Point2D b, Point2D c, Point2D d) {
  double d1 = cross(c, d, a);
  double d2 = cross(c, d, b);
  double d3 = cross(a, b, c);
  double d4 = cross(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  // touching or (near-)collinear overlap
  if (segment_point_distance(c, d, a) <= kGeomEps) return true;
  if (segment_point_distance(c, d, b) <= kGeomEps) return true;
  if (segment_point_distance(a, b, c) <= kGeomEps) return true;
  if (segment_point_distance(a, b, d) <= kGeomEps) return true;
  return false;
}

bool segment_intersects_polygon(Point2D a, Point2D b, const Polygon& poly) {
  const auto& v = poly.vertices;
  std::size_t n = v.size();
  if (n < 3) return false;
  // bounding-box reject; most sight lines miss most obstacles
  double px0 = v[0].x, px1 = v[0].x, py0 = v[0].y, py1 = v[0].y;
  for (const Point2D& p : v) {
    px0 = std::min(px0, p.x);
    px1 = std::max(px1, p.x);
    py0 = std::min(py0, p.y);
    py1 = std::max(py1, p.y);
  }
  if (std::max(a.x, b.x) < px0 - kGeomEps || std::min(a.x, b.x) > px1 + kGeomEps ||
      std::max(a.y, b.y) < py0 - kGeomEps || std::min(a.y, b.y) > py1 + kGeomEps)
    return false;
  if (a == b) return point_in_polygon(a, poly);
  for (std::size_t i = 0; i < n; ++i) {
    if (segments_intersect(a, b, v[i], v[(i + 1) % n])) return true;
  }
  // no edge crossing: the segment is entirely inside or entirely outside
  if (point_in_polygon(a, poly) || point_in_polygon(b, poly)) return true;
  return point_in_polygon({(a.x + b.x) / 2, (a.y + b.y) / 2}, poly);
}

double polygon_area(const Polygon& poly) {
  const auto& v = poly.vertices;
  std::size_t n = v.size();
  if (n < 3) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++)
    s += v[j].x * v[i].y - v[i].x * v[j].y;
  return std::abs(s) / 2.0;
}

bool polygon_is_simple(const Polygon& poly) {
  const auto& v = poly.vertices;
  std::size_t n = v.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    Point2D a = v[i], b = v[(i + 1) % n];
    if (a == b) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      // adjacent edges share an endpoint by construction
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      Point2D c = v[j], d = v[(j + 1) % n];
      if (segments_intersect(a, b, c, d)) return false;
    }
  }
  return true;
}

}  // namespace shire
