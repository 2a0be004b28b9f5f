#include <gtest/gtest.h>

#include <deque>
#include <map>
#include <set>

#include "annulus/bricks.hpp"
#include "annulus/error.hpp"
#include "support.hpp"

using namespace annulus;
using namespace annulus::bricks;
using testing_support::Gen;
using testing_support::P;
using testing_support::R;

namespace {

using MD = MapDescriptor;

LiftedMap rot(const char* rho) { return LiftedMap::make(MD::rotation(R(rho))); }
LiftedMap shift(const char* dx) { return LiftedMap::translation(R(dx)); }

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidInput;
}

// Lifted cells of every brick, keyed by brick id.
std::map<int, std::vector<Member>> by_brick(const BrickComplex& cx) {
  std::map<int, std::vector<Member>> out;
  for (int b : cx.brick_ids()) out[b] = cx.members(b);
  return out;
}

// Number of cells a brick has in its most populated row.
int widest_row(const BrickComplex& cx, const std::vector<Member>& ms) {
  std::map<int, int> per_row;
  for (const auto& m : ms) ++per_row[cx.cells[m.first].row];
  int best = 0;
  for (const auto& [row, n] : per_row) best = std::max(best, n);
  return best;
}

// Independent freeness check: plain exact polygon tests, no prefilters.
bool oracle_free(const BrickComplex& cx, const LiftedMap& f, const std::vector<Member>& ms) {
  for (const auto& a : ms)
    for (const auto& b : ms)
      if (polygons_intersect(f.apply_to_polygon(cx.cell_polygon(a.first, a.second)),
                             cx.cell_polygon(b.first, b.second)))
        return false;
  return true;
}

int seed_brick_at(const BrickComplex& cx, int row, int col) { return cx.brick_of[row * cx.cols + col]; }

}  // namespace

TEST(Decomposition, Examples) {
  const auto a = build_decomposition(R("-1"), R("1"), R("1/4"));
  EXPECT_EQ(a.rows, 8);
  EXPECT_EQ(a.cols, 2);
  EXPECT_EQ(a.brick_count(), 16);

  const auto b = build_decomposition(R("0"), R("1/4"), R("1/4"));
  EXPECT_EQ(b.rows, 1);
  EXPECT_EQ(b.brick_count(), 2);

  EXPECT_EQ(code_of([] { build_decomposition(R("-1"), R("1"), R("1/3")); }), ErrorCode::BadResolution);
  EXPECT_EQ(code_of([] { build_decomposition(R("-1"), R("1"), R("1/5")); }), ErrorCode::BadResolution);
  EXPECT_EQ(code_of([] { build_decomposition(R("0"), R("1/3"), R("1/4")); }), ErrorCode::BadResolution);
}

TEST(Decomposition, CellGeometry) {
  const auto cx = build_decomposition(R("0"), R("1"), R("1/4"));
  // Row 1 is shifted by half a brick.
  const Polygon p = cx.cell_polygon(1 * cx.cols + 0);
  EXPECT_EQ(p.front(), P("1/4", "1/4"));
  const Box box = Box::of(p);
  EXPECT_EQ(box.xmax - box.xmin, R("1/2"));
  EXPECT_EQ(box.ymax - box.ymin, R("1/4"));
  EXPECT_EQ(cx.cell_polygon(0, 1).front(), P("1", "0"));
}

TEST(Decomposition, TrivalentEverywhere) {
  for (const char* res : {"1/2", "1/4", "1/6", "1/10"}) {
    const auto cx = build_decomposition(R("-1"), R("1"), R(res));
    const auto rep = check_trivalence(cx);
    EXPECT_TRUE(rep.ok) << res;
    // Every lattice point of an interior row line is a vertex of the wall.
    EXPECT_EQ(rep.vertices, (cx.rows - 1) * cx.N) << res;
  }
}

TEST(Decomposition, TilesTheStrip) {
  // Cell areas over one period add up to the window area.
  const auto cx = build_decomposition(R("-1/2"), R("1"), R("1/6"));
  Rational area(0);
  for (size_t c = 0; c < cx.cells.size(); ++c) {
    const Box b = Box::of(cx.cell_polygon(static_cast<int>(c)));
    area += (b.xmax - b.xmin) * (b.ymax - b.ymin);
  }
  EXPECT_EQ(area, R("3/2"));
}

TEST(Merge, RigidRotationStopsBelowTwoFifths) {
  const auto f = rot("2/5");
  const auto cx = maximal_free_merge(build_decomposition(R("-1"), R("1"), R("1/10")), f);
  EXPECT_LT(cx.brick_count(), 100);
  for (const auto& [b, ms] : by_brick(cx)) {
    // Two side-by-side cells already span 2/5, which touches its image.
    EXPECT_EQ(widest_row(cx, ms), 1) << b;
    EXPECT_TRUE(oracle_free(cx, f, ms)) << b;
  }
  EXPECT_TRUE(check_trivalence(cx).ok);
}

TEST(Merge, TranslationByOnePeriod) {
  const auto f = shift("1");
  const auto cx = maximal_free_merge(build_decomposition(R("-1"), R("1"), R("1/4")), f);
  for (const auto& [b, ms] : by_brick(cx)) {
    EXPECT_EQ(widest_row(cx, ms), 1) << b;
    EXPECT_TRUE(oracle_free(cx, f, ms)) << b;
  }
  EXPECT_TRUE(check_trivalence(cx).ok);
}

TEST(Merge, RejectsNonFreeInput) {
  const auto cx = build_decomposition(R("-1"), R("1"), R("1/4"));
  EXPECT_EQ(code_of([&] { maximal_free_merge(cx, rot("0")); }), ErrorCode::NotFree);
}

TEST(Merge, IsMaximal) {
  // No adjacent pair of distinct lifted bricks can be merged any further.
  for (const char* dx : {"2/5", "3/4"}) {
    const auto f = shift(dx);
    const auto cx = maximal_free_merge(build_decomposition(R("-1/2"), R("1/2"), R("1/10")), f);
    for (int b1 : cx.brick_ids())
      for (int b2 : cx.brick_ids()) {
        if (b1 >= b2) continue;
        const auto m1 = cx.members(b1), m2 = cx.members(b2);
        for (long k = -2; k <= 2; ++k) {
          std::vector<Member> all = m1;
          bool adjacent = false;
          for (const auto& [c, o] : m2) {
            all.emplace_back(c, o + k);
            for (const auto& [c1, o1] : m1) {
              const auto& a = cx.cells[c1];
              const auto& b = cx.cells[c];
              const long X1 = a.X0 + o1 * cx.N, X2 = b.X0 + (o + k) * cx.N;
              if ((a.row == b.row && std::labs(X1 - X2) == 2) ||
                  (std::abs(a.row - b.row) == 1 && std::labs(X1 - X2) == 1))
                adjacent = true;
            }
          }
          if (adjacent) EXPECT_FALSE(brick_is_valid_and_free(cx, f, all)) << dx << " " << b1 << " " << b2;
        }
      }
  }
}

TEST(Relation, ConservativeContainsExact) {
  const auto cx = maximal_free_merge(build_decomposition(R("-1"), R("1"), R("1/10")),
                                     LiftedMap::make(testing_support::band_twist()));
  const auto f = LiftedMap::make(testing_support::band_twist());
  const auto exact = relation_graph(cx, f, 2, false);
  const auto loose = relation_graph(cx, f, 2, true);
  std::set<std::tuple<int, int, int, long>> l;
  for (const auto& e : loose.edges) l.insert({e.from, e.to, e.power, e.deck});
  for (const auto& e : exact.edges) EXPECT_TRUE(l.count({e.from, e.to, e.power, e.deck}));
}

TEST(Relation, ComparabilityCounts) {
  const auto f = shift("1/2");
  const auto cx = maximal_free_merge(build_decomposition(R("-1/2"), R("1/2"), R("1/10")), f);
  const auto none = comparability_stats(cx, RelationGraph{static_cast<int>(cx.cells.size()), {}}, 4);
  EXPECT_GT(none.adjacent_pairs, 0);
  EXPECT_EQ(none.comparable, 0);
  const auto full = comparability_stats(cx, relation_graph(cx, f, 4, true), 4);
  EXPECT_EQ(full.adjacent_pairs, none.adjacent_pairs);
  EXPECT_GT(full.comparable, 0);
  EXPECT_LE(full.comparable, full.adjacent_pairs);
}

TEST(Regions, TranslateHalf) {
  const auto f = shift("1/2");
  const auto cx = maximal_free_merge(build_decomposition(R("-1"), R("1"), R("1/10")), f);
  const int seed = seed_brick_at(cx, 10, 0);
  const auto rep = order_and_attractors(cx, f, seed, false);
  EXPECT_TRUE(rep.containment);
  EXPECT_FALSE(rep.whole_strip);
  ASSERT_EQ(rep.boundary.size(), 1u);
  EXPECT_TRUE(rep.boundary[0].starts_bottom);
  EXPECT_TRUE(rep.boundary[0].ends_top);

  const auto ex = extract_brouwer_lines(rep, f);
  ASSERT_EQ(ex.lines.size(), 1u);
  EXPECT_TRUE(ex.rejected.empty());
  EXPECT_EQ(ex.verdicts[0], OrderVerdict::StrictlyLess);
  // The seed cell lies on the right of the line, the cell to its left does not.
  const Rational ymid = R("1/20");
  EXPECT_EQ(lines::side_of(ex.lines[0], {R("1/10"), ymid}), Side::Right);
  EXPECT_EQ(lines::side_of(ex.lines[0], {R("-1/10"), ymid}), Side::Left);
  // Independent check of the Brouwer property.
  EXPECT_EQ(lines::compare(ex.lines[0], f.apply_to_line(ex.lines[0])), OrderVerdict::StrictlyLess);
}

TEST(Regions, DeckTranslationSaturates) {
  const auto f = shift("1");
  const auto cx = maximal_free_merge(build_decomposition(R("-1"), R("1"), R("1/4")), f);
  const auto rep = order_and_attractors(cx, f, cx.brick_ids().front(), true);
  EXPECT_TRUE(rep.whole_strip);
  EXPECT_TRUE(rep.boundary.empty());
  EXPECT_TRUE(rep.containment);
  EXPECT_TRUE(extract_brouwer_lines(rep, f).lines.empty());
}

TEST(Regions, RotationReachesSecondTranslate) {
  const auto f = rot("2/5");
  const auto cx = maximal_free_merge(build_decomposition(R("-1"), R("1"), R("1/10")), f);
  for (int seed : {cx.brick_ids().front(), cx.brick_ids().back()}) {
    const auto rep = order_and_attractors(cx, f, seed, true);
    EXPECT_NE(std::find(rep.seed_translates.begin(), rep.seed_translates.end(), 2L), rep.seed_translates.end());
    EXPECT_TRUE(rep.whole_strip);
  }
}

TEST(Regions, RepellerOfTranslation) {
  const auto f = shift("1/2");
  const auto cx = maximal_free_merge(build_decomposition(R("-1/2"), R("1/2"), R("1/10")), f);
  const auto rep = repeller_region(cx, f, seed_brick_at(cx, 5, 0));
  const auto ex = extract_brouwer_lines(rep, f.inverse());
  ASSERT_EQ(ex.lines.size(), 1u);
  // Boundary of the repeller of F is a Brouwer line of F^-1.
  EXPECT_EQ(ex.verdicts[0], OrderVerdict::StrictlyGreater);
}

TEST(Extract, ClosedLoopIsRejected) {
  RegionReport rep;
  BoundaryComponent loop;
  loop.closed = true;
  loop.points = {P("0", "0"), P("1", "0"), P("1", "1"), P("0", "1"), P("0", "0")};
  rep.boundary.push_back(loop);
  BoundaryComponent hook;
  hook.points = {P("0", "0"), P("0", "1/2"), P("1", "1/2"), P("1", "0")};
  hook.starts_bottom = true;
  rep.boundary.push_back(hook);
  const auto ex = extract_brouwer_lines(rep, shift("1/2"));
  EXPECT_TRUE(ex.lines.empty());
  ASSERT_EQ(ex.rejected.size(), 2u);
  EXPECT_EQ(ex.rejected[0].reason, "closed boundary loop");
}

TEST(Franks, SyntheticCycle) {
  RelationGraph g{4, {{0, 1, 1, 0}, {1, 2, 2, 0}, {2, 0, 1, 0}, {2, 3, 1, 1}}};
  const auto r = find_periodic_free_chain(g);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_TRUE(r.witness->closed);
  EXPECT_EQ(r.witness->disks.front(), r.witness->disks.back());
  EXPECT_EQ(r.witness->disks.size(), 4u);
  EXPECT_EQ(r.witness->powers.size(), 3u);
}

TEST(Franks, OneSignedCyclesAreAbsent) {
  RelationGraph g{3, {{0, 1, 1, 1}, {1, 2, 1, 0}, {2, 0, 1, 0}, {1, 1, 3, 2}}};
  const auto r = find_periodic_free_chain(g);
  EXPECT_FALSE(r.witness.has_value());
  EXPECT_TRUE(r.exhaustive);
}

TEST(Franks, MixedSignsCombine) {
  // Cycle weights +2 and -3 in one component give a zero-deck closed walk.
  RelationGraph g{2, {{0, 0, 1, 2}, {0, 1, 1, 0}, {1, 0, 1, -3}}};
  const auto r = find_periodic_free_chain(g);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(r.witness->disks.back(), (Member{r.witness->disks.front()}));
  EXPECT_EQ(r.witness->disks.front().second, 0);
}

TEST(Franks, RigidRotationHasNoChain) {
  const auto f = rot("2/5");
  const auto cx = maximal_free_merge(build_decomposition(R("-1"), R("1"), R("1/10")), f);
  const auto r = find_periodic_free_chain(cx, f, 8);
  EXPECT_FALSE(r.witness.has_value());
  EXPECT_TRUE(r.exhaustive);
}

TEST(Franks, DeckTranslationHasNoChain) {
  const auto f = shift("1");
  const auto cx = maximal_free_merge(build_decomposition(R("-1"), R("1"), R("1/4")), f);
  const auto r = find_periodic_free_chain(cx, f, 8);
  EXPECT_FALSE(r.witness.has_value());
  EXPECT_TRUE(r.exhaustive);
}

TEST(FixedPointCheck, ClampTwist) {
  const auto f = LiftedMap::make(testing_support::clamp_twist());
  const Polygon x1{P("0", "9/20"), P("1/10", "9/20"), P("1/10", "11/20"), P("0", "11/20")};
  const Polygon x2{P("0", "-11/20"), P("1/10", "-11/20"), P("1/10", "-9/20"), P("0", "-9/20")};
  const auto rep = lemma41_check(f, x1, x2, 1, 2, 1, 2);
  EXPECT_TRUE(rep.h1 && rep.h2 && rep.h3 && rep.h4_right && rep.h4_left);
  EXPECT_TRUE(rep.failures.empty());
  ASSERT_TRUE(rep.fixed_point_predicted);
  ASSERT_TRUE(rep.fixed_point.has_value());
  EXPECT_LE(maps::linf(f.apply(*rep.fixed_point), *rep.fixed_point), R("1/1000000000"));
  EXPECT_LE(rep.fixed_point->y.abs(), R("1/1000"));
}

TEST(FixedPointCheck, RigidRotationFailsLeftwardClause) {
  const Polygon x1{P("0", "0"), P("1/10", "0"), P("1/10", "1/10"), P("0", "1/10")};
  const Polygon x2{P("0", "1/2"), P("1/10", "1/2"), P("1/10", "3/5"), P("0", "3/5")};
  for (long p2 : {1L, 2L})
    for (long q2 : {1L, 3L, 5L}) {
      const auto rep = lemma41_check(rot("2/5"), x1, x2, 2, 5, p2, q2);
      EXPECT_FALSE(rep.h4_left);
      EXPECT_FALSE(rep.fixed_point_predicted);
    }
}

TEST(FixedPointCheck, WideSetMeetsItsTranslate) {
  const Polygon wide{P("0", "0"), P("3/2", "0"), P("3/2", "1/10"), P("0", "1/10")};
  const auto rep = lemma41_check(rot("1/3"), wide, wide, 1, 3, 1, 3);
  EXPECT_FALSE(rep.h2);
  EXPECT_TRUE(rep.h3);
  EXPECT_FALSE(rep.fixed_point_predicted);
}

TEST(FreeCircle, VerticalShift) {
  const auto f = LiftedMap::make(MD::shear({{R("0"), R("1")}}));
  CircleDescriptor zero;
  zero.breaks = {P("0", "0")};
  EXPECT_TRUE(circle_is_free(f, zero));
  const auto found = find_free_essential_circle(f, {});
  ASSERT_TRUE(found.has_value());
  EXPECT_TRUE(circle_is_free(f, *found));
}

TEST(FreeCircle, InvariantCirclesOnly) {
  EXPECT_FALSE(find_free_essential_circle(rot("2/5"), {}).has_value());
  EXPECT_FALSE(find_free_essential_circle(LiftedMap::make(testing_support::clamp_twist()), {}).has_value());
}

TEST(FreeCircle, ShearWithAFixedFibre) {
  // A uniform vertical shift frees every graph circle; a shear vanishing at
  // x = 0 frees none of them.
  CircleDescriptor c;
  c.breaks = {P("0", "0"), P("1/2", "1/5")};
  EXPECT_TRUE(circle_is_free(LiftedMap::make(MD::shear({{R("0"), R("1/10")}})), c));
  const auto g = LiftedMap::make(MD::shear({{R("0"), R("0")}, {R("1/2"), R("1/10")}}));
  EXPECT_FALSE(circle_is_free(g, c));
  EXPECT_FALSE(find_free_essential_circle(g, {}).has_value());
}

// ---------------------------------------------------------------------------
// Properties.

TEST(BricksProperty, RoundedTestIsConservative) {
  Gen gen(7);
  for (int trial = 0; trial < 400; ++trial) {
    auto tri = [&] {
      Polygon p;
      while (p.size() < 3) {
        const Point q = gen.point(-1, 1, 16);
        if (std::find(p.begin(), p.end(), q) == p.end()) p.push_back(q);
      }
      if (orient(p[0], p[1], p[2]) == 0) p[2].x += Rational(1, 32);
      return p;
    };
    const Polygon a = tri(), b = tri();
    if (!rounded_may_intersect(a, b)) EXPECT_FALSE(polygons_intersect(a, b)) << trial;
    EXPECT_EQ(bricks_meet(a, b), polygons_intersect(a, b)) << trial;
  }
}

TEST(BricksProperty, TrivalenceAfterMerging) {
  const std::vector<LiftedMap> maps{rot("2/5"), shift("1/2"), LiftedMap::make(testing_support::band_twist()),
                                    shift("3/4")};
  for (const auto& f : maps) {
    const auto cx = maximal_free_merge(build_decomposition(R("-1/2"), R("1/2"), R("1/10")), f);
    EXPECT_TRUE(check_trivalence(cx).ok);
    for (int b : cx.brick_ids()) EXPECT_TRUE(brick_is_valid_and_free(cx, f, cx.members(b)));
  }
}

TEST(BricksProperty, AcyclicForFixedPointFreeMaps) {
  const std::vector<LiftedMap> maps{rot("2/5"), shift("1/2"), LiftedMap::make(testing_support::band_twist())};
  for (const auto& f : maps) {
    const auto cx = maximal_free_merge(build_decomposition(R("-1/2"), R("1/2"), R("1/10")), f);
    const auto r = find_periodic_free_chain(cx, f, 8);
    EXPECT_FALSE(r.witness.has_value());
    EXPECT_TRUE(r.exhaustive);
  }
}

TEST(BricksProperty, OrderIsDeckEquivariant) {
  const auto f = shift("3/4");
  const auto cx = maximal_free_merge(build_decomposition(R("0"), R("1/2"), R("1/4")), f);
  const auto g = relation_graph(cx, f, 1);
  for (int a : cx.brick_ids())
    for (int b : cx.brick_ids())
      for (long k = -2; k <= 2; ++k)
        EXPECT_EQ(precedes(g, {a, 0}, {b, k}, 12), precedes(g, {a, 1}, {b, k + 1}, 12))
            << a << " " << b << " " << k;
}

TEST(BricksProperty, ChainSearchMatchesBruteForce) {
  // Oracle: breadth-first search over (node, deck) states in a wide window.
  Gen gen(23);
  for (int trial = 0; trial < 150; ++trial) {
    RelationGraph g;
    g.nodes = static_cast<int>(gen.integer(1, 5));
    const int m = static_cast<int>(gen.integer(0, 8));
    for (int i = 0; i < m; ++i)
      g.edges.push_back({static_cast<int>(gen.integer(0, g.nodes - 1)), static_cast<int>(gen.integer(0, g.nodes - 1)),
                         static_cast<int>(gen.integer(1, 3)), gen.integer(-2, 2)});
    bool brute = false;
    for (int s = 0; s < g.nodes && !brute; ++s) {
      std::set<Member> seen;
      std::deque<Member> q{{s, 0}};
      while (!q.empty() && !brute) {
        const Member cur = q.front();
        q.pop_front();
        for (const auto& e : g.edges) {
          if (e.from != cur.first) continue;
          const Member next{e.to, cur.second + e.deck};
          if (next == Member{s, 0}) brute = true;
          if (std::labs(next.second) <= 40 && seen.insert(next).second) q.push_back(next);
        }
      }
    }
    const auto r = find_periodic_free_chain(g);
    EXPECT_EQ(r.witness.has_value(), brute) << trial;
    if (!brute) EXPECT_TRUE(r.exhaustive) << trial;
    if (r.witness) {
      // Every link is an edge of the graph and decks add up.
      const auto& w = *r.witness;
      for (size_t i = 0; i + 1 < w.disks.size(); ++i) {
        const long d = w.disks[i + 1].second - w.disks[i].second;
        const bool ok = std::any_of(g.edges.begin(), g.edges.end(), [&](const RelationEdge& e) {
          return e.from == w.disks[i].first && e.to == w.disks[i + 1].first && e.deck == d && e.power == w.powers[i];
        });
        EXPECT_TRUE(ok) << trial;
      }
    }
  }
}
