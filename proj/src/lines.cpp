#include "annulus/lines.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "annulus/error.hpp"

namespace annulus {

// ---------------------------------------------------------------------------
// EssentialLine

EssentialLine EssentialLine::make(Rational tail_down, std::vector<Point> vertices,
                                  Rational tail_up) {
  if (vertices.empty()) {
    if (tail_down != tail_up)
      throw Error(ErrorCode::InvalidInput, "vertical line needs tail_down == tail_up");
  } else {
    if (vertices.front().x != tail_down)
      throw Error(ErrorCode::InvalidInput, "first vertex must lie on the downward tail");
    if (vertices.back().x != tail_up)
      throw Error(ErrorCode::InvalidInput, "last vertex must lie on the upward tail");
  }
  EssentialLine line;
  line.tail_down_ = std::move(tail_down);
  line.vertices_ = std::move(vertices);
  line.tail_up_ = std::move(tail_up);
  line.canonicalize();
  line.check_simple();
  return line;
}

EssentialLine EssentialLine::through(std::vector<Point> points) {
  if (points.empty()) throw Error(ErrorCode::InvalidInput, "no points");
  Rational down = points.front().x;
  Rational up = points.back().x;
  return make(std::move(down), std::move(points), std::move(up));
}

EssentialLine EssentialLine::vertical(const Rational& x) { return make(x, {}, x); }

EssentialLine EssentialLine::graph(const std::vector<std::pair<Rational, Rational>>& breaks) {
  if (breaks.empty()) throw Error(ErrorCode::InvalidInput, "graph needs breakpoints");
  std::vector<Point> pts;
  pts.reserve(breaks.size());
  for (const auto& [y, x] : breaks) {
    if (!pts.empty() && !(pts.back().y < y))
      throw Error(ErrorCode::InvalidInput, "graph breakpoints must be strictly increasing in y");
    pts.push_back({x, y});
  }
  return through(std::move(pts));
}

void EssentialLine::canonicalize() {
  if (vertices_.empty()) return;
  // Virtual points on the tails make tail-collinear vertices look like any
  // other redundant vertex.
  std::vector<Point> ext;
  ext.reserve(vertices_.size() + 2);
  ext.push_back({tail_down_, vertices_.front().y - Rational(1)});
  for (const Point& p : vertices_)
    if (!(p == ext.back())) ext.push_back(p);
  const Point top{tail_up_, vertices_.back().y + Rational(1)};
  ext.push_back(top);

  std::vector<Point> kept;
  kept.reserve(ext.size());
  for (size_t i = 0; i < ext.size(); ++i) {
    if (i == 0 || i + 1 == ext.size()) {
      kept.push_back(ext[i]);
      continue;
    }
    const Point& prev = kept.back();
    const Point& cur = ext[i];
    const Point& next = ext[i + 1];
    if (orient(prev, cur, next) == 0 && dot(cur - prev, next - cur).sign() > 0) continue;
    kept.push_back(cur);
  }
  // The previous pass only looks forward one step; repeat until stable.
  std::vector<Point> result(kept.begin() + 1, kept.end() - 1);
  if (result.size() != vertices_.size()) {
    vertices_ = std::move(result);
    canonicalize();
    return;
  }
  vertices_ = std::move(result);
}

std::vector<Point> EssentialLine::clipped(const Rational& ylo, const Rational& yhi) const {
  std::vector<Point> pts;
  pts.reserve(vertices_.size() + 2);
  pts.push_back({tail_down_, ylo});
  pts.insert(pts.end(), vertices_.begin(), vertices_.end());
  pts.push_back({tail_up_, yhi});
  return pts;
}

Rational EssentialLine::min_y() const {
  if (vertices_.empty()) return Rational(0);
  Rational m = vertices_.front().y;
  for (const Point& p : vertices_) m = min(m, p.y);
  return m;
}

Rational EssentialLine::max_y() const {
  if (vertices_.empty()) return Rational(0);
  Rational m = vertices_.front().y;
  for (const Point& p : vertices_) m = max(m, p.y);
  return m;
}

Rational EssentialLine::min_x() const {
  Rational m = min(tail_down_, tail_up_);
  for (const Point& p : vertices_) m = min(m, p.x);
  return m;
}

Rational EssentialLine::max_x() const {
  Rational m = max(tail_down_, tail_up_);
  for (const Point& p : vertices_) m = max(m, p.x);
  return m;
}

void EssentialLine::check_simple() const {
  const auto pts = clipped(min_y() - Rational(1), max_y() + Rational(1));
  const size_t nseg = pts.size() - 1;
  for (size_t i = 0; i < nseg; ++i) {
    const Box bi = Box::of(std::span(pts).subspan(i, 2));
    for (size_t j = i + 1; j < nseg; ++j) {
      if (!bi.overlaps(Box::of(std::span(pts).subspan(j, 2)))) continue;
      const SegmentHit hit = intersect_segments(pts[i], pts[i + 1], pts[j], pts[j + 1]);
      if (hit.kind == SegmentHit::Kind::None) continue;
      if (j == i + 1 && hit.kind == SegmentHit::Kind::Single && hit.first == pts[j]) continue;
      throw Error(ErrorCode::NotSimple, "segments " + std::to_string(i) + " and " +
                                            std::to_string(j) + " intersect");
    }
  }
}

bool EssentialLine::is_graph() const {
  for (size_t i = 1; i < vertices_.size(); ++i)
    if (!(vertices_[i - 1].y < vertices_[i].y)) return false;
  return true;
}

Rational EssentialLine::graph_x(const Rational& y) const {
  if (vertices_.empty()) return tail_down_;
  if (y <= vertices_.front().y) return vertices_.front().x;
  if (y >= vertices_.back().y) return vertices_.back().x;
  const auto it = std::lower_bound(vertices_.begin(), vertices_.end(), y,
                                   [](const Point& p, const Rational& v) { return p.y < v; });
  const Point& b = *it;
  const Point& a = *(it - 1);
  return a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y);
}

EssentialLine EssentialLine::translated(const Point& v) const {
  EssentialLine out = *this;
  out.tail_down_ += v.x;
  out.tail_up_ += v.x;
  for (Point& p : out.vertices_) p = p + v;
  return out;
}

// ---------------------------------------------------------------------------

std::string to_string(Side side) {
  switch (side) {
    case Side::Left: return "Left";
    case Side::Right: return "Right";
    case Side::On: return "On";
  }
  return "?";
}

std::string to_string(OrderVerdict verdict) {
  switch (verdict) {
    case OrderVerdict::StrictlyLess: return "StrictlyLess";
    case OrderVerdict::LessOrEqual: return "LessOrEqual";
    case OrderVerdict::Equal: return "Equal";
    case OrderVerdict::GreaterOrEqual: return "GreaterOrEqual";
    case OrderVerdict::StrictlyGreater: return "StrictlyGreater";
    case OrderVerdict::Crossing: return "Crossing";
  }
  return "?";
}

OrderVerdict flip(OrderVerdict verdict) {
  switch (verdict) {
    case OrderVerdict::StrictlyLess: return OrderVerdict::StrictlyGreater;
    case OrderVerdict::LessOrEqual: return OrderVerdict::GreaterOrEqual;
    case OrderVerdict::GreaterOrEqual: return OrderVerdict::LessOrEqual;
    case OrderVerdict::StrictlyGreater: return OrderVerdict::StrictlyLess;
    default: return verdict;
  }
}

namespace lines {
namespace {

struct Clip {
  Rational ylo;
  Rational yhi;
};

Clip common_clip(const EssentialLine& a, const EssentialLine& b) {
  Rational lo = min(a.min_y(), b.min_y()) - Rational(1);
  Rational hi = max(a.max_y(), b.max_y()) + Rational(1);
  return {lo, hi};
}

Side side_in_polyline(std::span<const Point> pts, const Point& p) {
  bool odd = false;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    const Point& a = pts[i];
    const Point& b = pts[i + 1];
    if (on_segment(p, a, b)) return Side::On;
    if ((a.y <= p.y) != (b.y <= p.y)) {
      const Rational x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (x < p.x) odd = !odd;
    }
  }
  return odd ? Side::Right : Side::Left;
}

// Position along a clipped polyline: segment index and parameter in [0, 1].
struct Pos {
  size_t seg = 0;
  Rational t;

  friend bool operator==(const Pos&, const Pos&) = default;
  friend bool operator<(const Pos& a, const Pos& b) {
    return a.seg != b.seg ? a.seg < b.seg : a.t < b.t;
  }
};

struct Event {
  Pos pos;
  Point p;
};

struct Curve {
  std::vector<Point> pts;
  std::vector<Event> events;

  size_t segs() const { return pts.size() - 1; }

  Pos normalize(Pos pos) const {
    if (pos.t == Rational(1) && pos.seg + 1 < segs()) return {pos.seg + 1, Rational(0)};
    return pos;
  }

  void add_event(size_t seg, const Point& p) {
    const Pos pos = normalize({seg, segment_param(p, pts[seg], pts[seg + 1])});
    events.push_back({pos, p});
  }

  void finish() {
    std::sort(events.begin(), events.end(),
              [](const Event& a, const Event& b) { return a.pos < b.pos; });
    events.erase(std::unique(events.begin(), events.end(),
                             [](const Event& a, const Event& b) { return a.pos == b.pos; }),
                 events.end());
  }

  std::optional<Point> dir_out(const Pos& pos) const {
    if (pos.t < Rational(1)) return pts[pos.seg + 1] - pts[pos.seg];
    if (pos.seg + 1 < segs()) return pts[pos.seg + 2] - pts[pos.seg + 1];
    return std::nullopt;
  }

  Point dir_in(const Pos& pos) const {
    if (pos.t > Rational(0)) return pts[pos.seg + 1] - pts[pos.seg];
    if (pos.seg > 0) return pts[pos.seg] - pts[pos.seg - 1];
    return {Rational(0), Rational(1)};
  }

  const Event* event_at(const Point& p) const {
    for (const Event& e : events)
      if (e.p == p) return &e;
    return nullptr;
  }

  const Event* next_after(const Pos& pos) const {
    for (const Event& e : events)
      if (pos < e.pos) return &e;
    return nullptr;
  }
};

// Events where two clipped polylines meet; overlaps contribute both ends.
void collect_events(Curve& a, Curve& b, bool reject_antiparallel) {
  for (size_t i = 0; i < a.segs(); ++i) {
    const Box bi = Box::of(std::span(a.pts).subspan(i, 2));
    for (size_t j = 0; j < b.segs(); ++j) {
      if (!bi.overlaps(Box::of(std::span(b.pts).subspan(j, 2)))) continue;
      const SegmentHit hit = intersect_segments(a.pts[i], a.pts[i + 1], b.pts[j], b.pts[j + 1]);
      if (hit.kind == SegmentHit::Kind::None) continue;
      if (hit.kind == SegmentHit::Kind::Overlap && reject_antiparallel &&
          dot(a.pts[i + 1] - a.pts[i], b.pts[j + 1] - b.pts[j]).sign() < 0)
        throw Error(ErrorCode::DegenerateOverlap,
                    "lines share a segment with opposite orientations");
      a.add_event(i, hit.first);
      b.add_event(j, hit.first);
      if (hit.kind == SegmentHit::Kind::Overlap) {
        a.add_event(i, hit.second);
        b.add_event(j, hit.second);
      }
    }
  }
  a.finish();
  b.finish();
}

// 3: straight back, 2: strictly left, 1: straight on, 0: strictly right.
int turn_group(const Point& din, const Point& d) {
  const int c = cross(din, d).sign();
  if (c > 0) return 2;
  if (c < 0) return 0;
  return dot(din, d).sign() > 0 ? 1 : 3;
}

// u turns strictly further left than v after arriving along din.
bool more_left(const Point& din, const Point& u, const Point& v) {
  const int gu = turn_group(din, u);
  const int gv = turn_group(din, v);
  if (gu != gv) return gu > gv;
  if (gu == 0 || gu == 2) return cross(v, u).sign() > 0;
  return false;
}

std::vector<std::pair<Rational, Rational>> graph_breaks_union(const EssentialLine& a,
                                                              const EssentialLine& b) {
  std::vector<Rational> ys;
  for (const Point& p : a.vertices()) ys.push_back(p.y);
  for (const Point& p : b.vertices()) ys.push_back(p.y);
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  std::vector<std::pair<Rational, Rational>> out;
  for (const Rational& y : ys) out.emplace_back(y, Rational(0));
  return out;
}

}  // namespace

Side side_of(const EssentialLine& line, const Point& p) {
  const Rational lo = min(line.min_y(), p.y) - Rational(1);
  const Rational hi = max(line.max_y(), p.y) + Rational(1);
  return side_in_polyline(line.clipped(lo, hi), p);
}

OrderVerdict compare(const EssentialLine& a, const EssentialLine& b) {
  if (a == b) return OrderVerdict::Equal;
  const Clip clip = common_clip(a, b);
  Curve ca{a.clipped(clip.ylo, clip.yhi), {}};
  Curve cb{b.clipped(clip.ylo, clip.yhi), {}};
  collect_events(ca, cb, false);

  // Sample a: every vertex plus a point strictly between consecutive events.
  std::vector<Point> samples;
  std::vector<Rational> ts;
  for (size_t i = 0; i < ca.segs(); ++i) {
    ts.assign({Rational(0), Rational(1)});
    for (const Event& e : ca.events) {
      if (e.pos.seg == i) ts.push_back(e.pos.t);
      if (e.pos.seg == i + 1 && e.pos.t == Rational(0)) ts.push_back(Rational(1));
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    const Point dir = ca.pts[i + 1] - ca.pts[i];
    for (size_t k = 0; k < ts.size(); ++k) {
      samples.push_back(ca.pts[i] + ts[k] * dir);
      if (k + 1 < ts.size()) samples.push_back(ca.pts[i] + midpoint(ts[k], ts[k + 1]) * dir);
    }
  }
  bool left = false;
  bool right = false;
  bool on = !ca.events.empty();
  // Side tests need the reference curve to extend past every sample height.
  const auto wide = b.clipped(clip.ylo - Rational(1), clip.yhi + Rational(1));
  for (const Point& p : samples) {
    switch (side_in_polyline(wide, p)) {
      case Side::Left: left = true; break;
      case Side::Right: right = true; break;
      case Side::On: on = true; break;
    }
    if (left && right) return OrderVerdict::Crossing;
  }
  if (!on) return left ? OrderVerdict::StrictlyLess : OrderVerdict::StrictlyGreater;
  if (left) return OrderVerdict::LessOrEqual;
  if (right) return OrderVerdict::GreaterOrEqual;
  return OrderVerdict::Equal;
}

bool disjoint(const EssentialLine& a, const EssentialLine& b) {
  const Clip clip = common_clip(a, b);
  return !polylines_intersect(a.clipped(clip.ylo, clip.yhi), b.clipped(clip.ylo, clip.yhi));
}

EssentialLine join_graph(const EssentialLine& a, const EssentialLine& b) {
  if (!a.is_graph() || !b.is_graph())
    throw Error(ErrorCode::InvalidInput, "join_graph needs graph-class lines");
  auto ys = graph_breaks_union(a, b);
  std::vector<Point> pts;
  auto value = [&](const Rational& y) { return min(a.graph_x(y), b.graph_x(y)); };
  for (size_t i = 0; i < ys.size(); ++i) {
    const Rational& y = ys[i].first;
    pts.push_back({value(y), y});
    if (i + 1 == ys.size()) break;
    // Where the difference changes sign strictly inside the interval.
    const Rational& y2 = ys[i + 1].first;
    const Rational d1 = a.graph_x(y) - b.graph_x(y);
    const Rational d2 = a.graph_x(y2) - b.graph_x(y2);
    if (d1.sign() * d2.sign() < 0) {
      const Rational yc = y + d1 / (d1 - d2) * (y2 - y);
      pts.push_back({a.graph_x(yc), yc});
    }
  }
  if (pts.empty()) return EssentialLine::vertical(min(a.tail_down(), b.tail_down()));
  return EssentialLine::through(std::move(pts));
}

EssentialLine join_traced(const EssentialLine& a, const EssentialLine& b) {
  if (a == b) return a;
  const Clip clip = common_clip(a, b);
  Curve curves[2] = {{a.clipped(clip.ylo, clip.yhi), {}}, {b.clipped(clip.ylo, clip.yhi), {}}};
  collect_events(curves[0], curves[1], true);

  int c = b.tail_down() < a.tail_down() ? 1 : 0;
  Pos pos{0, Rational(0)};
  Point here = curves[c].pts.front();
  Point din{Rational(0), Rational(1)};
  std::vector<Point> out{here};
  auto push = [&](const Point& p) {
    if (!(out.back() == p)) out.push_back(p);
  };

  const size_t guard = 4 * (curves[0].pts.size() + curves[1].pts.size() +
                            curves[0].events.size() + curves[1].events.size()) + 16;
  for (size_t iter = 0;; ++iter) {
    if (iter > guard)
      throw Error(ErrorCode::VerificationFailed, "join tracing did not terminate");
    const Curve& cur = curves[c];
    if (const Event* e = cur.event_at(here); e != nullptr && e->pos == pos) {
      const Curve& other = curves[1 - c];
      if (const Event* oe = other.event_at(here)) {
        const auto dc = cur.dir_out(pos);
        const auto dother = other.dir_out(oe->pos);
        if (dother && (!dc || more_left(din, *dother, *dc))) {
          c = 1 - c;
          pos = oe->pos;
        }
      }
    }
    const Curve& walk = curves[c];
    const Event* next = walk.next_after(pos);
    if (next == nullptr) {
      for (size_t k = pos.seg + 1; k < walk.pts.size(); ++k) push(walk.pts[k]);
      break;
    }
    for (size_t k = pos.seg + 1; k <= next->pos.seg; ++k) push(walk.pts[k]);
    push(next->p);
    din = walk.dir_in(next->pos);
    pos = next->pos;
    here = next->p;
  }
  return EssentialLine::through(std::move(out));
}

EssentialLine join(const EssentialLine& a, const EssentialLine& b) {
  if (a == b) return a;
  if (a.is_graph() && b.is_graph()) return join_graph(a, b);
  return join_traced(a, b);
}

EssentialLine join_all(std::span<const EssentialLine> lines) {
  if (lines.empty()) throw Error(ErrorCode::InvalidInput, "join of no lines");
  EssentialLine acc = lines.front();
  for (size_t i = 1; i < lines.size(); ++i) acc = join(acc, lines[i]);
  return acc;
}

EssentialLine midline_graph(const EssentialLine& a, const EssentialLine& b) {
  auto ys = graph_breaks_union(a, b);
  if (ys.empty()) return EssentialLine::vertical(midpoint(a.tail_down(), b.tail_down()));
  std::vector<Point> pts;
  for (const auto& [y, unused] : ys) pts.push_back({midpoint(a.graph_x(y), b.graph_x(y)), y});
  return EssentialLine::through(std::move(pts));
}

namespace {

// Horizontal trapezoidal decomposition of the strip between a < b.
struct Trapezoid {
  size_t band;
  // Left and right bounding segments (endpoints of the spanning edges).
  Point l0, l1, r0, r1;
  Rational ybot, ytop;

  Rational x_at(const Point& p, const Point& q, const Rational& y) const {
    if (p.y == q.y) return p.x;
    return p.x + (y - p.y) * (q.x - p.x) / (q.y - p.y);
  }
  Rational left_x(const Rational& y) const { return x_at(l0, l1, y); }
  Rational right_x(const Rational& y) const { return x_at(r0, r1, y); }
  Point centroid() const {
    const Rational s = left_x(ybot) + left_x(ytop) + right_x(ybot) + right_x(ytop);
    return {s / Rational(4), midpoint(ybot, ytop)};
  }
};

}  // namespace

EssentialLine midline_spine(const EssentialLine& a, const EssentialLine& b) {
  const Clip clip = common_clip(a, b);
  const auto pa = a.clipped(clip.ylo, clip.yhi);
  const auto pb = b.clipped(clip.ylo, clip.yhi);

  std::vector<Rational> levels{clip.ylo, clip.yhi};
  for (const Point& p : a.vertices()) levels.push_back(p.y);
  for (const Point& p : b.vertices()) levels.push_back(p.y);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  struct Edge {
    Point p, q;  // p.y < q.y
  };
  std::vector<Edge> edges;
  for (const auto* poly : {&pa, &pb})
    for (size_t i = 0; i + 1 < poly->size(); ++i) {
      Point p = (*poly)[i], q = (*poly)[i + 1];
      if (p.y == q.y) continue;
      if (q.y < p.y) std::swap(p, q);
      edges.push_back({p, q});
    }

  auto in_strip = [&](const Point& z) {
    return side_in_polyline(pa, z) == Side::Right && side_in_polyline(pb, z) == Side::Left;
  };

  // Trapezoids of the strip, per band.
  std::vector<std::vector<Trapezoid>> bands(levels.size() - 1);
  for (size_t k = 0; k + 1 < levels.size(); ++k) {
    const Rational& y0 = levels[k];
    const Rational& y1 = levels[k + 1];
    const Rational ym = midpoint(y0, y1);
    std::vector<std::pair<Rational, const Edge*>> crossing;
    for (const Edge& e : edges) {
      if (e.p.y <= y0 && y1 <= e.q.y)
        crossing.emplace_back(e.p.x + (ym - e.p.y) * (e.q.x - e.p.x) / (e.q.y - e.p.y), &e);
    }
    std::sort(crossing.begin(), crossing.end(),
              [](const auto& u, const auto& v) { return u.first < v.first; });
    for (size_t i = 0; i + 1 < crossing.size(); ++i) {
      const Edge& l = *crossing[i].second;
      const Edge& r = *crossing[i + 1].second;
      Trapezoid t{k, l.p, l.q, r.p, r.q, y0, y1};
      if (in_strip(t.centroid())) bands[k].push_back(t);
    }
  }

  // Windows: open intervals of each interior level line inside the strip.
  struct Window {
    Point mid;
    size_t below, above;  // trapezoid indices within bands[k-1], bands[k]
  };
  std::vector<std::vector<Window>> windows(levels.size());
  for (size_t k = 1; k + 1 < levels.size(); ++k) {
    const Rational& y = levels[k];
    std::vector<Rational> blocked;
    for (const auto* poly : {&pa, &pb})
      for (size_t i = 0; i + 1 < poly->size(); ++i) {
        const Point& p = (*poly)[i];
        const Point& q = (*poly)[i + 1];
        if (p.y == y) blocked.push_back(p.x);
        if (q.y == y) blocked.push_back(q.x);
        if ((p.y < y && y < q.y) || (q.y < y && y < p.y))
          blocked.push_back(p.x + (y - p.y) * (q.x - p.x) / (q.y - p.y));
      }
    std::sort(blocked.begin(), blocked.end());
    blocked.erase(std::unique(blocked.begin(), blocked.end()), blocked.end());
    for (size_t i = 0; i + 1 < blocked.size(); ++i) {
      const Point mid{midpoint(blocked[i], blocked[i + 1]), y};
      // Horizontal edges lying on the level are covered by on-curve tests.
      if (!in_strip(mid)) continue;
      auto find = [&](const std::vector<Trapezoid>& band, const Rational& yy) -> size_t {
        for (size_t t = 0; t < band.size(); ++t)
          if (band[t].left_x(yy) < mid.x && mid.x < band[t].right_x(yy)) return t;
        return band.size();
      };
      const size_t below = find(bands[k - 1], y);
      const size_t above = find(bands[k], y);
      if (below == bands[k - 1].size() || above == bands[k].size())
        throw Error(ErrorCode::VerificationFailed, "window without adjacent trapezoid");
      windows[k].push_back({mid, below, above});
    }
  }

  if (bands.front().size() != 1 || bands.back().size() != 1)
    throw Error(ErrorCode::VerificationFailed, "strip is not a single band at the tails");

  // Breadth-first search from the bottom trapezoid to the top one.
  using Node = std::pair<size_t, size_t>;  // (band, index)
  std::map<Node, std::pair<Node, const Window*>> parent;
  std::deque<Node> queue{{0, 0}};
  parent[{0, 0}] = {{0, 0}, nullptr};
  const Node goal{bands.size() - 1, 0};
  while (!queue.empty() && !parent.contains(goal)) {
    const Node n = queue.front();
    queue.pop_front();
    const auto [k, idx] = n;
    auto visit = [&](Node m, const Window* w) {
      if (parent.contains(m)) return;
      parent[m] = {n, w};
      queue.push_back(m);
    };
    if (k + 1 < levels.size())
      for (const Window& w : windows[k + 1])
        if (w.below == idx && k + 1 < bands.size()) visit({k + 1, w.above}, &w);
    if (k >= 1)
      for (const Window& w : windows[k])
        if (w.above == idx) visit({k - 1, w.below}, &w);
  }
  if (!parent.contains(goal))
    throw Error(ErrorCode::VerificationFailed, "strip decomposition is disconnected");

  std::vector<Point> spine;
  for (Node n = goal; n != Node{0, 0};) {
    const auto& [prev, w] = parent[n];
    if (n != goal) spine.push_back(bands[n.first][n.second].centroid());
    spine.push_back(w->mid);
    n = prev;
  }
  std::reverse(spine.begin(), spine.end());
  EssentialLine mid = spine.empty()
                          ? EssentialLine::vertical(midpoint(a.tail_down(), b.tail_down()))
                          : EssentialLine::through(std::move(spine));
  return mid;
}

EssentialLine midline(const EssentialLine& a, const EssentialLine& b) {
  if (compare(a, b) != OrderVerdict::StrictlyLess)
    throw Error(ErrorCode::NotNested, "midline needs a < b");
  EssentialLine mid = a.is_graph() && b.is_graph() ? midline_graph(a, b) : midline_spine(a, b);
  if (compare(a, mid) != OrderVerdict::StrictlyLess ||
      compare(mid, b) != OrderVerdict::StrictlyLess)
    throw Error(ErrorCode::VerificationFailed, "midline is not strictly between its inputs");
  return mid;
}

}  // namespace lines
}  // namespace annulus
