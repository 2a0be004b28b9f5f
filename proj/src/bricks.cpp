#include "annulus/bricks.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "annulus/error.hpp"
#include "annulus/parallel.hpp"
#include "annulus/rotation.hpp"

namespace annulus::bricks {

namespace {

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

long to_long(const mpz_class& z) {
  if (!z.fits_slong_p()) throw Error(ErrorCode::InvalidInput, "coordinate out of range");
  return z.get_si();
}

long floor_long(const Rational& r) { return to_long(r.floor()); }
long ceil_long(const Rational& r) { return -to_long((-r).floor()); }

// ---------------------------------------------------------------------------
// Floating-point helpers for the rounded test.

constexpr double kMargin = 1e-9;

struct DPt {
  double x, y;
};

std::vector<DPt> to_doubles(const Polygon& poly) {
  std::vector<DPt> out;
  out.reserve(poly.size());
  for (const auto& p : poly) out.push_back({p.x.to_double(), p.y.to_double()});
  return out;
}

double point_segment_distance(DPt p, DPt a, DPt b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

double orient_d(DPt a, DPt b, DPt c) { return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x); }

double segment_distance(DPt a, DPt b, DPt c, DPt d) {
  const double o1 = orient_d(a, b, c), o2 = orient_d(a, b, d);
  const double o3 = orient_d(c, d, a), o4 = orient_d(c, d, b);
  if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0)))
    return 0.0;
  return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                   point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

bool inside_d(DPt p, const std::vector<DPt>& poly) {
  bool in = false;
  for (size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const DPt a = poly[i], b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) in = !in;
    }
  }
  return in;
}

// ---------------------------------------------------------------------------
// Unit edges of the integer grid.

struct UnitEdge {
  long X, Y;
  int dir;  // 0: (X,Y)-(X+1,Y), 1: (X,Y)-(X,Y+1)
  auto operator<=>(const UnitEdge&) const = default;
};

using Vertex = std::pair<long, long>;

std::pair<Vertex, Vertex> ends(const UnitEdge& e) {
  return {{e.X, e.Y}, e.dir == 0 ? Vertex{e.X + 1, e.Y} : Vertex{e.X, e.Y + 1}};
}

std::array<UnitEdge, 6> cell_edges(long X0, long Y0) {
  return {UnitEdge{X0, Y0, 0}, UnitEdge{X0 + 1, Y0, 0}, UnitEdge{X0, Y0 + 1, 0},
          UnitEdge{X0 + 1, Y0 + 1, 0}, UnitEdge{X0, Y0, 1}, UnitEdge{X0 + 2, Y0, 1}};
}

long lifted_X0(const BrickComplex& cx, const Member& m) { return cx.cells[m.first].X0 + m.second * cx.N; }

std::map<UnitEdge, int> edge_counts(const BrickComplex& cx, const std::vector<Member>& cells) {
  std::map<UnitEdge, int> counts;
  for (const auto& m : cells)
    for (const auto& e : cell_edges(lifted_X0(cx, m), cx.cells[m.first].Y0)) ++counts[e];
  return counts;
}

/// One closed boundary cycle with every vertex of degree 2.
bool is_disk(const BrickComplex& cx, const std::vector<Member>& cells) {
  std::vector<UnitEdge> boundary;
  for (const auto& [e, n] : edge_counts(cx, cells))
    if (n == 1) boundary.push_back(e);
  if (boundary.empty()) return false;
  std::map<Vertex, std::vector<size_t>> at;
  for (size_t i = 0; i < boundary.size(); ++i) {
    const auto [a, b] = ends(boundary[i]);
    at[a].push_back(i);
    at[b].push_back(i);
  }
  for (const auto& [v, es] : at)
    if (es.size() != 2) return false;
  std::vector<bool> seen(boundary.size(), false);
  size_t count = 0;
  size_t cur = 0;
  Vertex v = ends(boundary[0]).first;
  while (!seen[cur]) {
    seen[cur] = true;
    ++count;
    const auto [a, b] = ends(boundary[cur]);
    const Vertex next = a == v ? b : a;
    const auto& es = at[next];
    cur = es[0] == cur ? es[1] : es[0];
    v = next;
  }
  return count == boundary.size();
}

/// Closed cells (c1 at deck k1) and (c2 at deck k2) share a point.
bool cells_touch(const BrickComplex& cx, const Member& a, const Member& b) {
  const long dr = std::labs(static_cast<long>(cx.cells[a.first].row - cx.cells[b.first].row));
  if (dr > 1) return false;
  return std::labs(lifted_X0(cx, a) - lifted_X0(cx, b)) <= 2;
}

// ---------------------------------------------------------------------------
// Cached cell geometry and images for one map.

struct Geometry {
  const BrickComplex& cx;
  std::vector<Polygon> cell;
  std::vector<Polygon> image;
  std::vector<Box> image_box;

  Geometry(const BrickComplex& complex, const LiftedMap& map) : cx(complex) {
    const size_t n = cx.cells.size();
    cell.resize(n);
    image.resize(n);
    image_box.resize(n);
    for (size_t c = 0; c < n; ++c) cell[c] = cx.cell_polygon(static_cast<int>(c));
    parallel_for(n, [&](size_t c) {
      image[c] = map.apply_to_polygon(cell[c]);
      image_box[c] = Box::of(image[c]);
    });
  }

  /// Lifted cells whose closed box meets the given box shifted by `deck`.
  std::vector<Member> candidates(const Box& box, long deck) const {
    std::vector<Member> out;
    const Rational r = cx.resolution;
    const Rational ya = (box.ymin - cx.ylo) / r, yb = (box.ymax - cx.ylo) / r;
    const Rational xa = box.xmin / r + Rational(deck * cx.N), xb = box.xmax / r + Rational(deck * cx.N);
    const long rlo = std::max(0L, ceil_long(ya) - 1), rhi = std::min<long>(cx.rows - 1, floor_long(yb));
    const long xlo = floor_long(xa), xhi = ceil_long(xb);
    for (long row = rlo; row <= rhi; ++row)
      for (int j = 0; j < cx.cols; ++j) {
        const int c = static_cast<int>(row) * cx.cols + j;
        const long X0 = cx.cells[c].X0;
        const long klo = -floor_div(X0 + 2 - xlo, cx.N), khi = floor_div(xhi - X0, cx.N);
        for (long k = klo; k <= khi; ++k) {
          const long L = X0 + k * cx.N;
          if (L <= xhi && L + 2 >= xlo) out.emplace_back(c, k);
        }
      }
    return out;
  }

  Polygon lifted_image(const Member& m) const { return translate(image[m.first], {Rational(m.second), Rational(0)}); }
  Polygon lifted_cell(const Member& m) const { return translate(cell[m.first], {Rational(m.second), Rational(0)}); }
};

bool exact_meet(const Polygon& a, const Polygon& b) { return bricks_meet(a, b); }

// F(U) n V = 0 for every member of U and V.
bool images_miss(const Geometry& g, const std::vector<Member>& us, const std::vector<Member>& vs) {
  for (const auto& u : us) {
    const Polygon img = g.lifted_image(u);
    const Box box = Box::of(img);
    for (const auto& v : vs) {
      const Polygon cell = g.lifted_cell(v);
      if (!box.overlaps(Box::of(cell))) continue;
      if (exact_meet(img, cell)) return false;
    }
  }
  return true;
}

bool translates_miss(const BrickComplex& cx, const std::vector<Member>& us, const std::vector<Member>& vs) {
  for (const auto& u : us)
    for (const auto& v : vs) {
      const long dx = lifted_X0(cx, v) - lifted_X0(cx, u);
      // k with |dx + kN| <= 2, k != 0
      for (long k = floor_div(-dx - 2, cx.N); k <= floor_div(-dx + 2, cx.N) + 1; ++k) {
        if (k == 0) continue;
        if (cells_touch(cx, u, {v.first, v.second + k})) return false;
      }
    }
  return true;
}

std::vector<Member> shifted(const std::vector<Member>& ms, long e) {
  std::vector<Member> out;
  out.reserve(ms.size());
  for (const auto& [c, o] : ms) out.emplace_back(c, o + e);
  return out;
}

/// Neighbors of cell c sharing an edge of positive length: (cell, deck).
std::vector<Member> neighbors(const BrickComplex& cx, int c) {
  const Cell& cell = cx.cells[c];
  auto cell_at = [&](int row, long X0) {
    const long t = X0 - (row % 2);
    const long deck = floor_div(t, cx.N);
    const long j = (t - deck * cx.N) / 2;
    return Member{row * cx.cols + static_cast<int>(j), deck};
  };
  std::vector<Member> out{cell_at(cell.row, cell.X0 - 2), cell_at(cell.row, cell.X0 + 2)};
  for (int dr : {-1, 1}) {
    const int row = cell.row + dr;
    if (row < 0 || row >= cx.rows) continue;
    out.push_back(cell_at(row, cell.X0 - 1));
    out.push_back(cell_at(row, cell.X0 + 1));
  }
  return out;
}

std::vector<std::vector<Member>> members_by_brick(const BrickComplex& cx) {
  std::vector<std::vector<Member>> out(cx.cells.size());
  for (size_t c = 0; c < cx.cells.size(); ++c)
    out[cx.brick_of[c]].emplace_back(static_cast<int>(c), cx.offset[c]);
  return out;
}

struct MemberHash {
  size_t operator()(const Member& m) const noexcept {
    return std::hash<long>{}(m.second * 1000003L + m.first);
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// BrickComplex

int BrickComplex::brick_count() const { return static_cast<int>(brick_ids().size()); }

std::vector<int> BrickComplex::brick_ids() const {
  std::set<int> ids(brick_of.begin(), brick_of.end());
  return {ids.begin(), ids.end()};
}

std::vector<Member> BrickComplex::members(int brick) const {
  std::vector<Member> out;
  for (size_t c = 0; c < cells.size(); ++c)
    if (brick_of[c] == brick) out.emplace_back(static_cast<int>(c), offset[c]);
  return out;
}

Point BrickComplex::grid_point(long X, long Y) const {
  return {Rational(X) * resolution, ylo + Rational(Y) * resolution};
}

Polygon BrickComplex::cell_polygon(int c, long deck) const {
  const Cell& cell = cells.at(c);
  const long X0 = cell.X0 + deck * N, Y0 = cell.Y0;
  Polygon poly{grid_point(X0, Y0)};
  if (cell.row > 0) poly.push_back(grid_point(X0 + 1, Y0));
  poly.push_back(grid_point(X0 + 2, Y0));
  poly.push_back(grid_point(X0 + 2, Y0 + 1));
  if (cell.row + 1 < rows) poly.push_back(grid_point(X0 + 1, Y0 + 1));
  poly.push_back(grid_point(X0, Y0 + 1));
  return poly;
}

BrickComplex build_decomposition(const Rational& ylo, const Rational& yhi, const Rational& resolution) {
  if (resolution.sign() <= 0) throw Error(ErrorCode::BadResolution, "resolution must be positive");
  const Rational inv = Rational(1) / resolution;
  if (!inv.is_integer() || inv.num() % 2 != 0)
    throw Error(ErrorCode::BadResolution, "1/resolution = " + inv.str() + " is not an even integer");
  if (!(ylo < yhi)) throw Error(ErrorCode::InvalidInput, "empty window");
  const Rational height = (yhi - ylo) / resolution;
  if (!height.is_integer())
    throw Error(ErrorCode::BadResolution, "window height is not a multiple of the resolution");

  BrickComplex cx;
  cx.ylo = ylo;
  cx.yhi = yhi;
  cx.resolution = resolution;
  cx.N = to_long(inv.num());
  cx.rows = static_cast<int>(to_long(height.num()));
  cx.cols = static_cast<int>(cx.N / 2);
  for (int i = 0; i < cx.rows; ++i)
    for (int j = 0; j < cx.cols; ++j) cx.cells.push_back({i, j, 2L * j + (i % 2), i});
  cx.brick_of.resize(cx.cells.size());
  for (size_t c = 0; c < cx.cells.size(); ++c) cx.brick_of[c] = static_cast<int>(c);
  cx.offset.assign(cx.cells.size(), 0);
  return cx;
}

TrivalenceReport check_trivalence(const BrickComplex& cx) {
  // Lifted brick identity of cell c placed at deck k.
  auto identity = [&](const Member& m) { return std::pair<int, long>(cx.brick_of[m.first], m.second - cx.offset[m.first]); };
  auto wrap = [&](UnitEdge e) {
    e.X = e.X - floor_div(e.X, cx.N) * cx.N;
    return e;
  };
  std::set<UnitEdge> skeleton;
  for (int c = 0; c < static_cast<int>(cx.cells.size()); ++c) {
    const Cell& cell = cx.cells[c];
    const Member self{c, 0};
    for (const auto& nb : neighbors(cx, c)) {
      if (identity(nb) == identity(self)) continue;
      const Cell& other = cx.cells[nb.first];
      const long X1 = other.X0 + nb.second * cx.N;
      if (other.row == cell.row) {
        skeleton.insert(wrap({std::max(cell.X0, X1), cell.Y0, 1}));
      } else {
        const long Y = std::max(cell.Y0, other.Y0);
        skeleton.insert(wrap({std::max(cell.X0, X1), Y, 0}));
      }
    }
  }
  std::map<Vertex, int> degree;
  for (const auto& e : skeleton) {
    auto [a, b] = ends(e);
    b.first = b.first - floor_div(b.first, cx.N) * cx.N;
    ++degree[a];
    ++degree[b];
  }
  TrivalenceReport rep;
  for (const auto& [v, d] : degree) {
    if (v.second <= 0 || v.second >= cx.rows) continue;
    if (d == 3) ++rep.vertices;
    else if (d != 2) ++rep.bad;
  }
  rep.ok = rep.bad == 0;
  return rep;
}

bool rounded_may_intersect(const Polygon& a, const Polygon& b) {
  const auto da = to_doubles(a), db = to_doubles(b);
  auto bbox = [](const std::vector<DPt>& p) {
    std::array<double, 4> r{p[0].x, p[0].y, p[0].x, p[0].y};
    for (const auto& q : p) {
      r[0] = std::min(r[0], q.x);
      r[1] = std::min(r[1], q.y);
      r[2] = std::max(r[2], q.x);
      r[3] = std::max(r[3], q.y);
    }
    return r;
  };
  const auto ba = bbox(da), bb = bbox(db);
  if (ba[2] + kMargin < bb[0] || bb[2] + kMargin < ba[0] || ba[3] + kMargin < bb[1] || bb[3] + kMargin < ba[1])
    return false;
  for (size_t i = 0; i < da.size(); ++i)
    for (size_t j = 0; j < db.size(); ++j)
      if (segment_distance(da[i], da[(i + 1) % da.size()], db[j], db[(j + 1) % db.size()]) <= kMargin)
        return true;
  return inside_d(da[0], db) || inside_d(db[0], da);
}

bool bricks_meet(const Polygon& a, const Polygon& b) {
  if (!rounded_may_intersect(a, b)) return false;
  return polygons_intersect(a, b);
}

bool brick_is_valid_and_free(const BrickComplex& cx, const LiftedMap& map, const std::vector<Member>& members) {
  if (members.empty()) return false;
  Geometry g(cx, map);
  return images_miss(g, members, members) && translates_miss(cx, members, members) && is_disk(cx, members);
}

BrickComplex maximal_free_merge(const BrickComplex& complex, const LiftedMap& map) {
  Geometry g(complex, map);
  for (size_t c = 0; c < complex.cells.size(); ++c)
    if (exact_meet(g.image[c], g.cell[c])) {
      std::ostringstream msg;
      msg << "brick at row " << complex.cells[c].row << ", column " << complex.cells[c].col
          << " meets its image";
      throw Error(ErrorCode::NotFree, msg.str());
    }

  BrickComplex cx = complex;
  auto members = members_by_brick(cx);
  std::vector<std::vector<Member>> nbrs(cx.cells.size());
  for (size_t c = 0; c < cx.cells.size(); ++c) nbrs[c] = neighbors(cx, static_cast<int>(c));

  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t c1 = 0; c1 < cx.cells.size(); ++c1) {
      for (const auto& [c2, dx] : nbrs[c1]) {
        const int A = cx.brick_of[c1], B = cx.brick_of[c2];
        if (A == B) continue;
        const long e = cx.offset[c1] + dx - cx.offset[c2];
        const auto moved = shifted(members[B], e);
        if (!images_miss(g, members[A], moved) || !images_miss(g, moved, members[A])) continue;
        if (!translates_miss(cx, members[A], moved)) continue;
        std::vector<Member> all = members[A];
        all.insert(all.end(), moved.begin(), moved.end());
        if (!is_disk(cx, all)) continue;
        for (const auto& [c, o] : moved) {
          cx.brick_of[c] = A;
          cx.offset[c] = o;
        }
        members[A] = std::move(all);
        members[B].clear();
        changed = true;
      }
    }
  }
  return cx;
}

// ---------------------------------------------------------------------------
// Relation

RelationGraph relation_graph(const BrickComplex& cx, const LiftedMap& map, int max_power, bool conservative) {
  if (max_power < 1) throw Error(ErrorCode::InvalidInput, "max_power must be positive");
  RelationGraph graph;
  graph.nodes = static_cast<int>(cx.cells.size());
  std::set<std::tuple<int, int, int, long>> seen;
  for (int m = 1; m <= max_power; ++m) {
    const Geometry g(cx, map.power(m));
    std::vector<std::vector<RelationEdge>> found(cx.cells.size());
    parallel_for(cx.cells.size(), [&](size_t c) {
      const long o = cx.offset[c];
      for (const auto& [c2, k] : g.candidates(g.image_box[c], 0)) {
        const Polygon target = g.lifted_cell({c2, k});
        const bool hit = conservative ? rounded_may_intersect(g.image[c], target) : exact_meet(g.image[c], target);
        if (hit) found[c].push_back({cx.brick_of[c], cx.brick_of[c2], m, k + o - cx.offset[c2]});
      }
    });
    for (const auto& list : found)
      for (const auto& e : list)
        if (seen.insert({e.from, e.to, e.power, e.deck}).second) graph.edges.push_back(e);
  }
  std::sort(graph.edges.begin(), graph.edges.end(), [](const RelationEdge& a, const RelationEdge& b) {
    return std::tie(a.power, a.from, a.to, a.deck) < std::tie(b.power, b.from, b.to, b.deck);
  });
  return graph;
}

namespace {

std::vector<Member> reach(const RelationGraph& graph, Member start, long deck_range) {
  std::map<int, std::vector<std::pair<int, long>>> adj;
  for (const auto& e : graph.edges)
    if (e.power == 1) adj[e.from].emplace_back(e.to, e.deck);
  std::set<Member> seen{start};
  std::deque<Member> queue{start};
  while (!queue.empty()) {
    const auto [b, k] = queue.front();
    queue.pop_front();
    for (const auto& [to, d] : adj[b]) {
      const Member next{to, k + d};
      if (std::labs(next.second) > deck_range) continue;
      if (seen.insert(next).second) queue.push_back(next);
    }
  }
  return {seen.begin(), seen.end()};
}

long default_deck_range(const BrickComplex& cx, const LiftedMap& map) {
  const Rational spread = Rational(cx.rows) * (map.displacement_bound() + Rational(2) * cx.resolution);
  return std::min(64L, 4 + ceil_long(spread));
}

}  // namespace

bool precedes(const RelationGraph& graph, Member a, Member b, long deck_range) {
  const auto r = reach(graph, a, deck_range);
  return std::binary_search(r.begin(), r.end(), b);
}

ComparabilityStats comparability_stats(const BrickComplex& cx, const RelationGraph& graph, long deck_range) {
  std::set<std::pair<Member, Member>> pairs;
  for (size_t c = 0; c < cx.cells.size(); ++c)
    for (const auto& [c2, dx] : neighbors(cx, static_cast<int>(c))) {
      const Member a{cx.brick_of[c], -cx.offset[c]};
      const Member b{cx.brick_of[c2], dx - cx.offset[c2]};
      if (a == b) continue;
      // normalise the orbit so that the first brick sits at deck 0
      Member x = a, y = b;
      if (y < x) std::swap(x, y);
      pairs.insert({{x.first, 0}, {y.first, y.second - x.second}});
    }
  ComparabilityStats stats;
  for (const auto& [a, b] : pairs) {
    ++stats.adjacent_pairs;
    if (precedes(graph, a, b, deck_range) || precedes(graph, b, a, deck_range)) ++stats.comparable;
  }
  return stats;
}

// ---------------------------------------------------------------------------
// Regions

namespace {

RegionReport region_for(const BrickComplex& cx, const LiftedMap& map, int seed, bool t_union,
                        std::optional<long> range_opt) {
  const auto ids = cx.brick_ids();
  if (!std::binary_search(ids.begin(), ids.end(), seed))
    throw Error(ErrorCode::InvalidInput, "unknown seed brick " + std::to_string(seed));
  const long K = range_opt ? *range_opt : default_deck_range(cx, map);
  if (K < 1) throw Error(ErrorCode::InvalidInput, "deck range must be positive");

  RegionReport rep;
  rep.seed = seed;
  rep.use_t_union = t_union;
  rep.deck_range = K;
  rep.resolution = cx.resolution;
  rep.ylo = cx.ylo;
  rep.yhi = cx.yhi;

  const RelationGraph graph = relation_graph(cx, map, 1, true);
  rep.reachable = reach(graph, {seed, 0}, K);
  for (const auto& [b, k] : rep.reachable)
    if (b == seed && k != 0) rep.seed_translates.push_back(k);

  std::set<int> orbit_set;
  for (const auto& m : rep.reachable) orbit_set.insert(m.first);
  rep.whole_strip = t_union && orbit_set.size() == ids.size();

  // Lifted cells of the region, deck range [-K, K].
  std::unordered_set<Member, MemberHash> region;
  auto add_brick = [&](int b, long k) {
    for (const auto& [c, o] : cx.members(b))
      if (std::labs(o + k) <= K) region.insert({c, o + k});
  };
  if (t_union) {
    for (int b : orbit_set)
      for (long k = -K - 2; k <= K + 2; ++k) add_brick(b, k);
  } else {
    for (const auto& [b, k] : rep.reachable) add_brick(b, k);
  }

  // Containment: images of region cells away from the truncation meet no
  // other cell.
  const Geometry g(cx, map);
  std::vector<Member> cells(region.begin(), region.end());
  std::sort(cells.begin(), cells.end());
  std::vector<char> ok(cells.size(), 1);
  parallel_for(cells.size(), [&](size_t i) {
    const auto [c, k] = cells[i];
    if (std::labs(k) >= K) return;
    const Polygon img = g.lifted_image(cells[i]);
    for (const auto& cand : g.candidates(g.image_box[c], k)) {
      if (region.count(cand)) continue;
      if (std::labs(cand.second) > K) continue;
      if (bricks_meet(img, g.lifted_cell(cand))) {
        ok[i] = 0;
        return;
      }
    }
  });
  rep.containment = std::all_of(ok.begin(), ok.end(), [](char v) { return v != 0; });

  // Boundary edges, minus the window's top and bottom.
  std::map<Vertex, std::vector<UnitEdge>> at;
  std::vector<UnitEdge> boundary;
  for (const auto& [e, n] : edge_counts(cx, cells)) {
    if (n != 1) continue;
    if (e.dir == 0 && (e.Y == 0 || e.Y == cx.rows)) continue;
    boundary.push_back(e);
  }
  for (const auto& e : boundary) {
    const auto [a, b] = ends(e);
    at[a].push_back(e);
    at[b].push_back(e);
  }
  std::set<UnitEdge> used;
  const long left_cut = -K * cx.N + 1, right_cut = (K + 1) * cx.N;

  auto walk = [&](Vertex start) {
    std::vector<Vertex> path{start};
    Vertex v = start;
    for (;;) {
      const UnitEdge* next = nullptr;
      for (const auto& e : at[v])
        if (!used.count(e)) {
          next = &e;
          break;
        }
      if (!next) break;
      used.insert(*next);
      const auto [a, b] = ends(*next);
      v = a == v ? b : a;
      path.push_back(v);
      if (v == start) break;
    }
    return path;
  };

  std::vector<std::vector<Vertex>> paths;
  for (const auto& [v, es] : at)
    if (es.size() % 2 == 1 && std::any_of(es.begin(), es.end(), [&](const UnitEdge& e) { return !used.count(e); }))
      paths.push_back(walk(v));
  for (const auto& e : boundary)
    if (!used.count(e)) paths.push_back(walk(ends(e).first));

  for (auto& path : paths) {
    const bool truncated = std::any_of(path.begin(), path.end(), [&](const Vertex& v) {
      return v.first <= left_cut || v.first >= right_cut;
    });
    if (truncated) continue;
    BoundaryComponent comp;
    comp.closed = path.size() > 2 && path.front() == path.back();
    if (!comp.closed && path.front().second > path.back().second) std::reverse(path.begin(), path.end());
    comp.starts_bottom = !comp.closed && path.front().second == 0;
    comp.ends_top = !comp.closed && path.back().second == cx.rows;
    for (const auto& [X, Y] : path) comp.points.push_back(cx.grid_point(X, Y));
    rep.boundary.push_back(std::move(comp));
  }
  return rep;
}

}  // namespace

RegionReport order_and_attractors(const BrickComplex& cx, const LiftedMap& map, int seed_brick,
                                  bool use_t_union, std::optional<long> deck_range) {
  return region_for(cx, map, seed_brick, use_t_union, deck_range);
}

RegionReport repeller_region(const BrickComplex& cx, const LiftedMap& map, int seed_brick,
                             std::optional<long> deck_range) {
  return region_for(cx, map.inverse(), seed_brick, false, deck_range);
}

ExtractResult extract_brouwer_lines(const RegionReport& report, const LiftedMap& map) {
  ExtractResult out;
  for (const auto& comp : report.boundary) {
    if (comp.closed) {
      out.rejected.push_back({comp, "closed boundary loop"});
      continue;
    }
    if (!comp.starts_bottom || !comp.ends_top) {
      out.rejected.push_back({comp, "component does not cross the window from bottom to top"});
      continue;
    }
    try {
      const EssentialLine line = EssentialLine::through(comp.points);
      out.verdicts.push_back(maps::is_brouwer_line(map, line));
      out.lines.push_back(line);
    } catch (const Error& e) {
      out.rejected.push_back({comp, e.what()});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Periodic free chains

namespace {

// Tarjan's strongly connected components over node ids 0..n-1.
std::vector<int> scc_labels(int n, const std::vector<RelationEdge>& edges) {
  std::vector<std::vector<int>> adj(n);
  for (const auto& e : edges) adj[e.from].push_back(e.to);
  std::vector<int> index(n, -1), low(n, 0), label(n, -1);
  std::vector<bool> on(n, false);
  std::vector<int> stack;
  int counter = 0, labels = 0;
  std::function<void(int)> visit = [&](int v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on[v] = true;
    for (int w : adj[v]) {
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      for (;;) {
        const int w = stack.back();
        stack.pop_back();
        on[w] = false;
        label[w] = labels;
        if (w == v) break;
      }
      ++labels;
    }
  };
  for (int v = 0; v < n; ++v)
    if (index[v] < 0) visit(v);
  return label;
}

// Negative cycle detection (Bellman-Ford from a virtual source).
bool has_negative_cycle(int n, const std::vector<std::tuple<int, int, long>>& edges) {
  std::vector<long> dist(n, 0);
  for (int round = 0; round <= n; ++round) {
    bool relaxed = false;
    for (const auto& [u, v, w] : edges)
      if (dist[u] + w < dist[v]) {
        dist[v] = dist[u] + w;
        relaxed = true;
      }
    if (!relaxed) return false;
  }
  return true;
}

std::optional<ChainWitness> lifted_cycle(const std::vector<int>& nodes,
                                         const std::vector<RelationEdge>& edges, long bound) {
  std::map<int, std::vector<const RelationEdge*>> adj;
  for (const auto& e : edges) adj[e.from].push_back(&e);
  for (int s : nodes) {
    // BFS over (node, cumulative deck) back to (s, 0).
    std::map<Member, std::pair<Member, const RelationEdge*>> parent;
    std::deque<Member> queue{{s, 0}};
    parent[{s, 0}] = {{-1, 0}, nullptr};
    const RelationEdge* closing = nullptr;
    Member closing_from{};
    while (!queue.empty() && !closing) {
      const Member cur = queue.front();
      queue.pop_front();
      for (const RelationEdge* e : adj[cur.first]) {
        const Member next{e->to, cur.second + e->deck};
        if (next == Member{s, 0}) {
          closing = e;
          closing_from = cur;
          break;
        }
        if (std::labs(next.second) > bound || parent.count(next)) continue;
        parent[next] = {cur, e};
        queue.push_back(next);
      }
    }
    if (!closing) continue;
    std::vector<Member> disks{{s, 0}};
    std::vector<int> powers{closing->power};
    for (Member v = closing_from; v != Member{s, 0}; v = parent[v].first) {
      disks.push_back(v);
      powers.push_back(parent[v].second->power);
    }
    // disks: s, v_k, ..., v_1 with powers reversed; reorder as a forward walk.
    std::reverse(disks.begin() + 1, disks.end());
    std::reverse(powers.begin(), powers.end());
    disks.push_back({s, 0});
    ChainWitness w;
    w.disks = std::move(disks);
    w.powers = std::move(powers);
    w.closed = true;
    return w;
  }
  return std::nullopt;
}

}  // namespace

ChainSearch find_periodic_free_chain(const RelationGraph& graph) {
  for (const auto& e : graph.edges)
    if (e.from < 0 || e.to < 0 || e.from >= graph.nodes || e.to >= graph.nodes || e.power < 1)
      throw Error(ErrorCode::InvalidInput, "relation edge outside the graph");
  const auto label = scc_labels(graph.nodes, graph.edges);
  std::map<int, std::vector<int>> comps;
  for (int v = 0; v < graph.nodes; ++v) comps[label[v]].push_back(v);

  ChainSearch out;
  out.exhaustive = true;
  for (const auto& [id, nodes] : comps) {
    std::vector<RelationEdge> inner;
    for (const auto& e : graph.edges)
      if (label[e.from] == id && label[e.to] == id) inner.push_back(e);
    if (inner.empty()) continue;
    std::map<int, int> local;
    for (int v : nodes) local.emplace(v, static_cast<int>(local.size()));
    const long n = static_cast<long>(nodes.size());
    std::vector<std::tuple<int, int, long>> up, down;
    long wmax = 1;
    for (const auto& e : inner) {
      up.emplace_back(local[e.from], local[e.to], (n + 1) * e.deck - 1);
      down.emplace_back(local[e.from], local[e.to], -(n + 1) * e.deck - 1);
      wmax = std::max(wmax, std::labs(e.deck));
    }
    // A simple cycle of weight <= 0 and one of weight >= 0 in the same
    // component combine into a closed walk of total deck 0.
    if (!has_negative_cycle(static_cast<int>(n), up) || !has_negative_cycle(static_cast<int>(n), down)) continue;
    out.exhaustive = false;
    for (long bound = 2 * n * wmax; bound <= 4 * n * n * wmax * wmax + 4 * n * wmax; bound *= 2) {
      if (auto w = lifted_cycle(nodes, inner, bound)) {
        out.witness = std::move(w);
        return out;
      }
    }
  }
  return out;
}

ChainSearch find_periodic_free_chain(const BrickComplex& cx, const LiftedMap& map, int max_power) {
  // Compact brick ids to 0..n-1 for the graph search and map them back.
  const auto ids = cx.brick_ids();
  std::map<int, int> local;
  for (int b : ids) local.emplace(b, static_cast<int>(local.size()));
  RelationGraph g = relation_graph(cx, map, max_power, false);
  RelationGraph compact{static_cast<int>(ids.size()), {}};
  for (auto e : g.edges) {
    e.from = local[e.from];
    e.to = local[e.to];
    compact.edges.push_back(e);
  }
  ChainSearch out = find_periodic_free_chain(compact);
  if (out.witness)
    for (auto& d : out.witness->disks) d.first = ids[d.first];
  return out;
}

// ---------------------------------------------------------------------------
// Fixed-point hypotheses

Lemma41Report lemma41_check(const LiftedMap& map, const Polygon& x1, const Polygon& x2, long p1, long q1,
                            long p2, long q2) {
  if (x1.size() < 3 || x2.size() < 3) throw Error(ErrorCode::InvalidInput, "sets need at least three vertices");
  if (p1 < 1 || q1 < 1 || p2 < 1 || q2 < 1) throw Error(ErrorCode::InvalidInput, "p, q must be positive");
  auto shift = [](const Polygon& p, long k) { return translate(p, {Rational(k), Rational(0)}); };
  Lemma41Report rep;

  rep.h1 = !bricks_meet(map.apply_to_polygon(x1), x1) && !bricks_meet(map.apply_to_polygon(x2), x2);
  if (!rep.h1) rep.failures.push_back("hypothesis 1: a set meets its image");

  auto self_translates_miss = [&](const Polygon& x) {
    const Box b = Box::of(x);
    const long w = ceil_long(b.xmax - b.xmin) + 1;
    for (long k = -w; k <= w; ++k)
      if (k != 0 && bricks_meet(shift(x, k), x)) return false;
    return true;
  };
  rep.h2 = self_translates_miss(x1) && self_translates_miss(x2);
  if (!rep.h2) rep.failures.push_back("hypothesis 2: a set meets a deck translate of itself");

  if (x1 == x2) {
    rep.h3 = true;
  } else {
    const Box b1 = Box::of(x1), b2 = Box::of(x2);
    rep.h3 = true;
    for (long k = floor_long(b2.xmin - b1.xmax) - 1; k <= ceil_long(b2.xmax - b1.xmin) + 1; ++k)
      if (bricks_meet(shift(x1, k), x2)) {
        rep.h3 = false;
        break;
      }
  }
  if (!rep.h3) rep.failures.push_back("hypothesis 3: X1 != X2 and a translate of X1 meets X2");

  rep.h4_right = bricks_meet(map.power(q1).apply_to_polygon(x1), shift(x1, p1));
  rep.h4_left = bricks_meet(map.power(q2).apply_to_polygon(x2), shift(x2, -p2));
  if (!rep.h4_right) rep.failures.push_back("hypothesis 4: F^q1(X1) misses T^p1(X1)");
  if (!rep.h4_left) rep.failures.push_back("hypothesis 4: F^q2(X2) misses T^-p2(X2)");

  rep.fixed_point_predicted = rep.h1 && rep.h2 && rep.h3 && rep.h4_right && rep.h4_left;
  if (rep.fixed_point_predicted && map.is_twist_type()) {
    const Box b1 = Box::of(x1), b2 = Box::of(x2);
    const rotation::Window window{Rational(0), Rational(1), min(b1.ymin, b2.ymin), max(b1.ymax, b2.ymax)};
    rep.fixed_point = rotation::find_periodic_point(map, Rational(0), window, Rational(1, 1000000000));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Free circles

namespace {

std::vector<Point> circle_period(const CircleDescriptor& circle) {
  std::vector<Point> pts = circle.breaks;
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.x < b.x; });
  pts.push_back({pts.front().x + Rational(1), pts.front().y});
  return pts;
}

}  // namespace

bool circle_is_free(const LiftedMap& map, const CircleDescriptor& circle) {
  if (circle.breaks.empty()) throw Error(ErrorCode::InvalidInput, "circle without breakpoints");
  const auto period = circle_period(circle);
  const auto image = map.apply_to_polyline(period, false);
  const Box b = Box::of(image);
  for (long k = floor_long(b.xmin) - 2; k <= ceil_long(b.xmax) + 1; ++k) {
    std::vector<Point> piece;
    for (const auto& p : period) piece.push_back({p.x + Rational(k), p.y});
    if (polylines_intersect(image, piece)) return false;
  }
  return true;
}

std::optional<CircleDescriptor> find_free_essential_circle(const LiftedMap& map, const CircleFamily& family,
                                                           size_t budget) {
  if (family.levels < 1 || !(family.ylo <= family.yhi))
    throw Error(ErrorCode::InvalidInput, "bad circle family");
  size_t tried = 0;
  for (int i = 0; i < family.levels; ++i) {
    const Rational c = family.levels == 1 ? family.ylo
                                          : family.ylo + (family.yhi - family.ylo) * Rational(i, family.levels - 1);
    for (const Rational& a : family.amplitudes) {
      if (tried++ >= budget) return std::nullopt;
      CircleDescriptor circle;
      circle.level = c;
      circle.amplitude = a;
      circle.breaks.push_back({Rational(0), c});
      if (a.sign() != 0) circle.breaks.push_back({Rational(1, 2), c + a});
      if (circle_is_free(map, circle)) return circle;
    }
  }
  return std::nullopt;
}

}  // namespace annulus::bricks
