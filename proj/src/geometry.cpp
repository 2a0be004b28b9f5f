#include "annulus/geometry.hpp"

#include <algorithm>

namespace annulus {

int orient(const Point& a, const Point& b, const Point& c) {
  return cross(b - a, c - a).sign();
}

bool on_segment(const Point& p, const Point& a, const Point& b) {
  if (orient(a, b, p) != 0) return false;
  return min(a.x, b.x) <= p.x && p.x <= max(a.x, b.x) && min(a.y, b.y) <= p.y &&
         p.y <= max(a.y, b.y);
}

Rational segment_param(const Point& p, const Point& a, const Point& b) {
  const Point d = b - a;
  return dot(p - a, d) / dot(d, d);
}

SegmentHit intersect_segments(const Point& a, const Point& b, const Point& c, const Point& d) {
  SegmentHit hit;
  const int d1 = orient(c, d, a);
  const int d2 = orient(c, d, b);
  const int d3 = orient(a, b, c);
  const int d4 = orient(a, b, d);
  if (d1 == 0 && d2 == 0) {
    // Collinear: intersect parameter ranges along a -> b.
    Rational t0 = segment_param(c, a, b);
    Rational t1 = segment_param(d, a, b);
    if (t1 < t0) std::swap(t0, t1);
    const Rational lo = max(t0, Rational(0));
    const Rational hi = min(t1, Rational(1));
    if (hi < lo) return hit;
    const Point dir = b - a;
    hit.first = a + lo * dir;
    hit.second = a + hi * dir;
    hit.kind = lo == hi ? SegmentHit::Kind::Single : SegmentHit::Kind::Overlap;
    return hit;
  }
  if (d1 * d2 > 0 || d3 * d4 > 0) return hit;
  const Point r = b - a;
  const Point s = d - c;
  const Rational t = cross(c - a, s) / cross(r, s);
  hit.kind = SegmentHit::Kind::Single;
  hit.first = a + t * r;
  hit.second = hit.first;
  return hit;
}

Box Box::of(std::span<const Point> pts) {
  Box box{pts.front().x, pts.front().y, pts.front().x, pts.front().y};
  for (const Point& p : pts) {
    if (p.x < box.xmin) box.xmin = p.x;
    if (p.x > box.xmax) box.xmax = p.x;
    if (p.y < box.ymin) box.ymin = p.y;
    if (p.y > box.ymax) box.ymax = p.y;
  }
  return box;
}

PolygonLocation locate_in_polygon(const Point& p, const Polygon& poly) {
  const size_t n = poly.size();
  bool inside = false;
  for (size_t i = 0; i < n; ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % n];
    if (on_segment(p, a, b)) return PolygonLocation::Boundary;
    // Half-open crossing rule on a rightward horizontal ray.
    if ((a.y <= p.y) != (b.y <= p.y)) {
      const Rational x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside ? PolygonLocation::Inside : PolygonLocation::Outside;
}

bool polylines_intersect(std::span<const Point> a, std::span<const Point> b) {
  if (a.size() < 2 || b.size() < 2) return false;
  if (!Box::of(a).overlaps(Box::of(b))) return false;
  for (size_t i = 0; i + 1 < a.size(); ++i) {
    const Box sa = Box::of(a.subspan(i, 2));
    for (size_t j = 0; j + 1 < b.size(); ++j) {
      if (!sa.overlaps(Box::of(b.subspan(j, 2)))) continue;
      if (intersect_segments(a[i], a[i + 1], b[j], b[j + 1]).kind != SegmentHit::Kind::None)
        return true;
    }
  }
  return false;
}

namespace {

std::vector<Point> closed_ring(const Polygon& poly) {
  std::vector<Point> ring(poly.begin(), poly.end());
  ring.push_back(poly.front());
  return ring;
}

}  // namespace

bool polyline_meets_polygon(std::span<const Point> path, const Polygon& poly) {
  if (path.empty()) return false;
  if (!Box::of(path).overlaps(Box::of(poly))) return false;
  if (locate_in_polygon(path.front(), poly) != PolygonLocation::Outside) return true;
  return polylines_intersect(path, closed_ring(poly));
}

bool polygons_intersect(const Polygon& a, const Polygon& b) {
  if (!Box::of(a).overlaps(Box::of(b))) return false;
  if (locate_in_polygon(a.front(), b) != PolygonLocation::Outside) return true;
  if (locate_in_polygon(b.front(), a) != PolygonLocation::Outside) return true;
  const auto ra = closed_ring(a);
  const auto rb = closed_ring(b);
  return polylines_intersect(ra, rb);
}

Polygon translate(const Polygon& poly, const Point& v) {
  Polygon out;
  out.reserve(poly.size());
  for (const Point& p : poly) out.push_back(p + v);
  return out;
}

}  // namespace annulus
