#pragma once

// Exact planar primitives: points, orientation, segment intersection and
// closed-polygon tests. All predicates are exact over Rational.

#include <optional>
#include <span>
#include <vector>

#include "annulus/rational.hpp"

namespace annulus {

struct Point {
  Rational x;
  Rational y;

  friend bool operator==(const Point&, const Point&) = default;
  friend Point operator+(const Point& a, const Point& b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(const Point& a, const Point& b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(const Rational& s, const Point& a) { return {s * a.x, s * a.y}; }
};

/// Lexicographic (y, then x) ordering, used for sorting event points.
inline bool yx_less(const Point& a, const Point& b) {
  return a.y != b.y ? a.y < b.y : a.x < b.x;
}

inline Rational cross(const Point& a, const Point& b) { return a.x * b.y - a.y * b.x; }
inline Rational dot(const Point& a, const Point& b) { return a.x * b.x + a.y * b.y; }

/// Sign of the turn a -> b -> c: +1 counter-clockwise, -1 clockwise, 0 collinear.
int orient(const Point& a, const Point& b, const Point& c);

/// p lies on the closed segment [a, b].
bool on_segment(const Point& p, const Point& a, const Point& b);

/// Parameter of p along a -> b (p assumed on the supporting line).
Rational segment_param(const Point& p, const Point& a, const Point& b);

struct SegmentHit {
  enum class Kind { None, Single, Overlap };
  Kind kind = Kind::None;
  Point first;   // the single point, or the overlap end nearest a
  Point second;  // overlap end farthest from a (equals first for Single)
};

/// Intersection of closed segments [a, b] and [c, d].
SegmentHit intersect_segments(const Point& a, const Point& b, const Point& c, const Point& d);

struct Box {
  Rational xmin, ymin, xmax, ymax;

  static Box of(std::span<const Point> pts);
  bool overlaps(const Box& o) const {
    return !(xmax < o.xmin || o.xmax < xmin || ymax < o.ymin || o.ymax < ymin);
  }
};

/// Closed simple polygon as a vertex ring (no repeated closing vertex).
using Polygon = std::vector<Point>;

enum class PolygonLocation { Inside, Boundary, Outside };

PolygonLocation locate_in_polygon(const Point& p, const Polygon& poly);

/// Do the closed regions bounded by two simple polygons meet?
bool polygons_intersect(const Polygon& a, const Polygon& b);

/// Does the closed polyline `path` meet the closed polygon region?
bool polyline_meets_polygon(std::span<const Point> path, const Polygon& poly);

/// Do two open polylines (sequences of segments) share a point?
bool polylines_intersect(std::span<const Point> a, std::span<const Point> b);

Polygon translate(const Polygon& poly, const Point& v);

}  // namespace annulus
