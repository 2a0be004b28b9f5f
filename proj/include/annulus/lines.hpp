#pragma once

// Essential lines of the plane: simple proper PL curves oriented upward with
// vertical tails. The left region L(line) contains every far-left point.
//
// Orders: a <= b when L(a) is inside L(b); a < b when the closure of L(a)
// is inside L(b). join(a, b) is the boundary of the far-left component of
// L(a) n L(b): it is contained in a u b and lies below both for <=.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "annulus/geometry.hpp"

namespace annulus {

class EssentialLine {
 public:
  /// Builds and canonicalizes a line; throws NotSimple / InvalidInput.
  /// With empty `vertices` the line is the vertical x = tail_down (tail_up must match).
  static EssentialLine make(Rational tail_down, std::vector<Point> vertices, Rational tail_up);
  /// Line through the given points, tails taken from the first and last point.
  static EssentialLine through(std::vector<Point> points);
  static EssentialLine vertical(const Rational& x);
  /// Graph x = g(y) for the PL function with breakpoints (y_i, x_i), constant outside.
  static EssentialLine graph(const std::vector<std::pair<Rational, Rational>>& breaks);

  const Rational& tail_down() const { return tail_down_; }
  const Rational& tail_up() const { return tail_up_; }
  const std::vector<Point>& vertices() const { return vertices_; }

  /// Curve truncated to the finite polyline running from y = ylo to y = yhi.
  /// Requires ylo < every vertex y < yhi.
  std::vector<Point> clipped(const Rational& ylo, const Rational& yhi) const;

  /// Smallest / largest vertex y (0 when there are no vertices).
  Rational min_y() const;
  Rational max_y() const;
  Rational min_x() const;
  Rational max_x() const;

  /// True when the curve is the graph of a function of y (strictly increasing y).
  bool is_graph() const;
  /// Value x = g(y) for graph-class lines.
  Rational graph_x(const Rational& y) const;

  EssentialLine translated(const Point& v) const;

  friend bool operator==(const EssentialLine&, const EssentialLine&) = default;

 private:
  EssentialLine() = default;
  void canonicalize();
  void check_simple() const;

  Rational tail_down_;
  std::vector<Point> vertices_;
  Rational tail_up_;
};

enum class Side { Left, Right, On };

enum class OrderVerdict {
  StrictlyLess,
  LessOrEqual,
  Equal,
  GreaterOrEqual,
  StrictlyGreater,
  Crossing,
};

std::string to_string(Side side);
std::string to_string(OrderVerdict verdict);
OrderVerdict flip(OrderVerdict verdict);

namespace lines {

Side side_of(const EssentialLine& line, const Point& p);

OrderVerdict compare(const EssentialLine& a, const EssentialLine& b);

/// True when the two curves share no point.
bool disjoint(const EssentialLine& a, const EssentialLine& b);

/// Boundary of the far-left component of L(a) n L(b). Graph-class inputs use
/// the pointwise minimum; anything else goes through boundary tracing.
EssentialLine join(const EssentialLine& a, const EssentialLine& b);
EssentialLine join_graph(const EssentialLine& a, const EssentialLine& b);
EssentialLine join_traced(const EssentialLine& a, const EssentialLine& b);
EssentialLine join_all(std::span<const EssentialLine> lines);

/// A line strictly between a < b. Throws NotNested otherwise.
EssentialLine midline(const EssentialLine& a, const EssentialLine& b);
EssentialLine midline_graph(const EssentialLine& a, const EssentialLine& b);
EssentialLine midline_spine(const EssentialLine& a, const EssentialLine& b);

}  // namespace lines
}  // namespace annulus
