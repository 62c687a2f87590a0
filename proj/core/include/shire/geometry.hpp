#pragma once

#include <vector>

namespace shire {

struct Point2D {
  double x = 0;
  double y = 0;
  friend bool operator==(const Point2D&, const Point2D&) = default;
};

double distance(Point2D a, Point2D b);

// Simple polygon: >= 3 vertices, non-self-intersecting, nonzero area.
struct Polygon {
  std::vector<Point2D> vertices;
  friend bool operator==(const Polygon&, const Polygon&) = default;
};

// Anything within this distance of an obstacle edge counts as blocked;
// conservative and keeps on-edge cases deterministic.
inline constexpr double kGeomEps = 1e-9;

double segment_point_distance(Point2D a, Point2D b, Point2D p);

// Boundary (within kGeomEps) counts as inside.
bool point_in_polygon(Point2D p, const Polygon& poly);

// Proper crossings plus eps-inclusive touching/collinear overlap.
bool segments_intersect(Point2D a, Point2D b, Point2D c, Point2D d);

// True iff the segment a-b meets the polygon interior or any edge.
// A degenerate segment (a == b) reduces to point containment.
bool segment_intersects_polygon(Point2D a, Point2D b, const Polygon& poly);

double polygon_area(const Polygon& poly);
bool polygon_is_simple(const Polygon& poly);

}  // namespace shire
