#pragma once

// Lifted annulus homeomorphisms F of the plane commuting with the deck
// translation T(x, y) = (x + 1, y).
//
// Every map is a finite composition of two primitive kinds:
//   twist  (x, y) -> (x + tau(y), y)     tau PL in y, constant outside a compact range
//   shear  (x, y) -> (x, y + sigma(x))   sigma PL and 1-periodic in x
// Rigid rotations and deck shifts are constant twists. Both kinds are exact
// bijections on rational points, commute with T and send vertical rays far
// from the twist breakpoints to vertical rays, which keeps line tails vertical.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "annulus/geometry.hpp"
#include "annulus/lines.hpp"

namespace annulus {

/// Piecewise-linear function with breakpoints (t_i, v_i), constant outside.
class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;
  explicit PiecewiseLinear(std::vector<std::pair<Rational, Rational>> breaks);
  static PiecewiseLinear constant(const Rational& c);

  Rational operator()(const Rational& t) const;
  const std::vector<std::pair<Rational, Rational>>& breaks() const { return breaks_; }
  /// Abscissas where the slope actually changes.
  std::vector<Rational> kinks() const;
  Rational sup_abs() const;
  Rational at_minus_infinity() const { return breaks_.front().second; }
  Rational at_plus_infinity() const { return breaks_.back().second; }
  bool is_zero() const;

  PiecewiseLinear operator+(const PiecewiseLinear& o) const;
  PiecewiseLinear operator-() const;

 private:
  std::vector<std::pair<Rational, Rational>> breaks_{{Rational(0), Rational(0)}};
};

/// 1-periodic piecewise-linear function given by breakpoints in [0, 1).
class PeriodicPL {
 public:
  PeriodicPL() = default;
  explicit PeriodicPL(std::vector<std::pair<Rational, Rational>> breaks);
  static PeriodicPL constant(const Rational& c);

  Rational operator()(const Rational& x) const;
  const std::vector<std::pair<Rational, Rational>>& breaks() const { return breaks_; }
  /// All breakpoint abscissas (shifted by integers) strictly inside (lo, hi).
  std::vector<Rational> kinks_between(const Rational& lo, const Rational& hi) const;
  Rational sup_abs() const;
  bool is_zero() const;

  PeriodicPL operator+(const PeriodicPL& o) const;
  PeriodicPL operator-() const;

 private:
  std::vector<std::pair<Rational, Rational>> breaks_{{Rational(0), Rational(0)}};
};

struct TwistStep {
  PiecewiseLinear tau;
};
struct ShearStep {
  PeriodicPL sigma;
};
using MapStep = std::variant<TwistStep, ShearStep>;

/// Descriptor tree; mirrors the JSON map format.
struct MapDescriptor {
  struct Rotation { Rational rho; };
  struct Twist { PiecewiseLinear tau; bool linear_tails = false; };
  struct Shear { std::vector<std::pair<Rational, Rational>> sigma; };
  struct Compose { std::vector<MapDescriptor> maps; };  // maps[0] o maps[1] o ...
  struct Power { std::shared_ptr<MapDescriptor> base; long k; };
  struct Deck { long k; };

  std::variant<Rotation, Twist, Shear, Compose, Power, Deck> node;

  static MapDescriptor rotation(const Rational& rho) { return {Rotation{rho}}; }
  static MapDescriptor twist(std::vector<std::pair<Rational, Rational>> breaks) {
    return {Twist{PiecewiseLinear(std::move(breaks))}};
  }
  static MapDescriptor shear(std::vector<std::pair<Rational, Rational>> breaks) {
    return {Shear{std::move(breaks)}};
  }
  static MapDescriptor compose(std::vector<MapDescriptor> maps) { return {Compose{std::move(maps)}}; }
  static MapDescriptor power(MapDescriptor base, long k) {
    return {Power{std::make_shared<MapDescriptor>(std::move(base)), k}};
  }
  static MapDescriptor deck(long k) { return {Deck{k}}; }
};

class LiftedMap {
 public:
  /// Validates the descriptor and flattens it into primitive steps.
  /// Throws NotEventuallyRigid / NotInvertible.
  static LiftedMap make(const MapDescriptor& desc);
  static LiftedMap identity();
  static LiftedMap translation(const Rational& dx);

  const MapDescriptor& descriptor() const { return desc_; }
  const std::vector<MapStep>& steps() const { return steps_; }

  Point apply(const Point& p) const;
  Point apply_inverse(const Point& p) const;

  /// sup |F(z) - z| in the max norm is at most this.
  const Rational& displacement_bound() const { return displacement_; }
  /// Outside |y| >= threshold the map sends vertical rays to vertical rays,
  /// shifting them horizontally by shift_below / shift_above.
  const Rational& rigidity_threshold() const { return threshold_; }
  const Rational& shift_below() const { return shift_below_; }
  const Rational& shift_above() const { return shift_above_; }

  /// True when the map has no shear step (orbits keep their y coordinate).
  bool is_twist_type() const;

  LiftedMap inverse() const;
  LiftedMap power(long k) const;
  /// this o other (apply other first).
  LiftedMap after(const LiftedMap& other) const;

  /// Exact image of a polyline, subdividing at every PL breakpoint crossed.
  std::vector<Point> apply_to_polyline(std::span<const Point> pts, bool closed,
                                       size_t budget = kDefaultBudget) const;
  Polygon apply_to_polygon(const Polygon& poly, size_t budget = kDefaultBudget) const;
  EssentialLine apply_to_line(const EssentialLine& line, size_t budget = kDefaultBudget) const;

  static constexpr size_t kDefaultBudget = 200000;

 private:
  LiftedMap() = default;
  void finalize();

  MapDescriptor desc_;
  std::vector<MapStep> steps_;
  Rational displacement_;
  Rational threshold_;
  Rational shift_below_;
  Rational shift_above_;
};

namespace maps {

/// compare(line, F(line)); StrictlyLess certifies line < F(line), which is
/// then cross-checked against F^-1(line) < line.
OrderVerdict is_brouwer_line(const LiftedMap& map, const EssentialLine& line);

/// Max-norm distance between two points.
Rational linf(const Point& a, const Point& b);

}  // namespace maps
}  // namespace annulus
