#pragma once

// T-periodic brick-wall decompositions of a horizontal strip, maximal free
// merging, the relation F(B) n B' != 0 with its reachability order,
// attractor regions and their boundary lines, periodic chain search,
// fixed-point hypothesis checks and a free essential circle search.
//
// Cells live on an integer grid: x = X * r, y = ylo + Y * r with r the
// resolution. Row i, column j covers X in [2j + (i mod 2), 2j + (i mod 2) + 2],
// Y in [i, i + 1]. One period spans N = 1 / r grid units in X.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "annulus/geometry.hpp"
#include "annulus/lines.hpp"
#include "annulus/maps.hpp"

namespace annulus::bricks {

struct Cell {
  int row = 0;
  int col = 0;
  long X0 = 0;  // left edge, grid units
  long Y0 = 0;
};

/// A lifted member of a merged brick: cell c shifted by deck translate k.
using Member = std::pair<int, long>;

struct BrickComplex {
  Rational ylo, yhi, resolution;
  long N = 0;  // grid units per period
  int rows = 0;
  int cols = 0;  // cells per row per period
  std::vector<Cell> cells;
  // Merged structure: cell c is the member (c, offset[c]) of brick brick_of[c].
  std::vector<int> brick_of;
  std::vector<long> offset;

  int brick_count() const;
  std::vector<int> brick_ids() const;
  std::vector<Member> members(int brick) const;
  Polygon cell_polygon(int c, long deck = 0) const;
  Point grid_point(long X, long Y) const;
};

/// Throws BadResolution unless 1/resolution is an even integer and the
/// window height is a whole number of rows.
BrickComplex build_decomposition(const Rational& ylo, const Rational& yhi,
                                 const Rational& resolution);

struct TrivalenceReport {
  bool ok = true;
  int vertices = 0;  // interior skeleton vertices (degree 3)
  int bad = 0;       // interior points with degree other than 0, 2, 3
};

TrivalenceReport check_trivalence(const BrickComplex& complex);

/// Floating-point pre-test with an outward margin. False means the closed
/// polygons are certainly disjoint; true means they may meet.
bool rounded_may_intersect(const Polygon& a, const Polygon& b);

/// Exact intersection, behind the rounded pre-test.
bool bricks_meet(const Polygon& a, const Polygon& b);

/// F(B) n B = 0, B disjoint from its own deck translates, B a closed disk.
bool brick_is_valid_and_free(const BrickComplex& complex, const LiftedMap& map,
                             const std::vector<Member>& members);

/// Greedy merging of T-orbits of adjacent bricks in a fixed scan order.
/// Throws NotFree if some initial cell meets its own image.
BrickComplex maximal_free_merge(const BrickComplex& complex, const LiftedMap& map);

/// Lifted edge from brick `from` (at deck 0) to T^deck(brick `to`) under F^power.
struct RelationEdge {
  int from = 0;
  int to = 0;
  int power = 1;
  long deck = 0;
  friend bool operator==(const RelationEdge&, const RelationEdge&) = default;
};

struct RelationGraph {
  int nodes = 0;
  std::vector<RelationEdge> edges;
};

/// Edges for F^m, m = 1..max_power. With `conservative` the rounded test alone
/// decides (a superset of the exact relation).
RelationGraph relation_graph(const BrickComplex& complex, const LiftedMap& map, int max_power,
                             bool conservative = false);

/// Lifted reachability: a path of F-edges (power 1) from a to b whose decks
/// stay within [-deck_range, deck_range].
bool precedes(const RelationGraph& graph, Member a, Member b, long deck_range);

struct ComparabilityStats {
  int adjacent_pairs = 0;  // adjacent lifted brick pairs, one per T-orbit
  int comparable = 0;      // pairs ordered one way or the other
};

ComparabilityStats comparability_stats(const BrickComplex& complex, const RelationGraph& graph,
                                       long deck_range);

struct BoundaryComponent {
  std::vector<Point> points;  // in path order; first == last when closed
  bool closed = false;
  bool starts_bottom = false;
  bool ends_top = false;
};

struct RegionReport {
  int seed = 0;
  bool use_t_union = false;
  long deck_range = 0;
  std::vector<Member> reachable;     // lifted bricks (brick id, deck)
  std::vector<long> seed_translates; // k != 0 with T^k(seed) reachable
  bool whole_strip = false;          // T-union covers every brick
  bool containment = false;          // F(region) stays off every other cell
  std::vector<BoundaryComponent> boundary;
  Rational resolution;
  Rational ylo, yhi;
};

/// Reachability from the seed brick, the region B>= (or its T-union), the
/// containment check and the boundary components not touching the deck range.
RegionReport order_and_attractors(const BrickComplex& complex, const LiftedMap& map, int seed_brick,
                                  bool use_t_union, std::optional<long> deck_range = std::nullopt);

/// Same search run on the relation of F^{-1}: the repeller B<=.
RegionReport repeller_region(const BrickComplex& complex, const LiftedMap& map, int seed_brick,
                             std::optional<long> deck_range = std::nullopt);

struct RejectedComponent {
  BoundaryComponent component;
  std::string reason;  // NotALine detail
};

struct ExtractResult {
  std::vector<EssentialLine> lines;
  std::vector<OrderVerdict> verdicts;  // is_brouwer_line for each line
  std::vector<RejectedComponent> rejected;
};

ExtractResult extract_brouwer_lines(const RegionReport& report, const LiftedMap& map);

struct ChainWitness {
  std::vector<Member> disks;  // (brick, cumulative deck), last equals first
  std::vector<int> powers;    // powers[i] links disks[i] to disks[i + 1]
  bool closed = false;
};

struct ChainSearch {
  std::optional<ChainWitness> witness;
  /// True when absence is certified: no strongly connected component carries
  /// closed walks of both deck signs, so no lifted cycle exists at any length.
  bool exhaustive = false;
};

ChainSearch find_periodic_free_chain(const RelationGraph& graph);
ChainSearch find_periodic_free_chain(const BrickComplex& complex, const LiftedMap& map,
                                     int max_power);

struct Lemma41Report {
  bool h1 = false;  // F(X_i) n X_i = 0
  bool h2 = false;  // T^k(X_i) n X_i = 0, k != 0
  bool h3 = false;  // X_1 = X_2 or T^k(X_1) n X_2 = 0
  bool h4_right = false;  // F^{q1}(X_1) n T^{p1}(X_1) != 0
  bool h4_left = false;   // F^{q2}(X_2) n T^{-p2}(X_2) != 0
  bool fixed_point_predicted = false;
  std::optional<Point> fixed_point;
  std::vector<std::string> failures;
};

Lemma41Report lemma41_check(const LiftedMap& map, const Polygon& x1, const Polygon& x2, long p1,
                            long q1, long p2, long q2);

/// Circles y = h(x mod 1) with h = c + a * bump(x), bump the tent with peak 1
/// at x = 1/2 and 0 at x = 0.
struct CircleFamily {
  Rational ylo{-1};
  Rational yhi{1};
  int levels = 9;
  std::vector<Rational> amplitudes{Rational(0), Rational(1, 4), Rational(-1, 4)};
};

struct CircleDescriptor {
  std::vector<Point> breaks;  // (x, h(x)) for x in [0, 1), periodic
  Rational level;
  Rational amplitude;
};

std::optional<CircleDescriptor> find_free_essential_circle(const LiftedMap& map,
                                                           const CircleFamily& family,
                                                           size_t budget = 1000);

/// Exact test: is the circle disjoint from its image?
bool circle_is_free(const LiftedMap& map, const CircleDescriptor& circle);

}  // namespace annulus::bricks
