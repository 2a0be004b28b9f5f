#pragma once

// Orbits, recurrence detection and rotation-number estimates for lifted maps.

#include <optional>
#include <string>
#include <vector>

#include "annulus/maps.hpp"

namespace annulus::rotation {

struct OrbitSample {
  Point seed;
  int length = 0;
  /// displacements[k] = p1(F^{k+1}(z)) - p1(z).
  std::vector<Rational> displacements;
  /// Times n in 1..length with dist(f^n(z), z) < eps in the chosen cover.
  std::vector<int> recurrence_times;
  int cover_modulus = 1;
};

/// Max-norm distance in the quotient of the plane by x -> x + modulus.
Rational quotient_distance(const Point& a, const Point& b, long modulus);

OrbitSample orbit_with_recurrence(const LiftedMap& map, const Point& seed, int n,
                                  const Rational& eps, long cover_modulus = 1);

struct RotationNumber {
  Rational value;   // d_m / m at the last recurrence time m
  Rational spread;  // max - min of d_m / m over all recurrence times
  int time = 0;
};

/// Absent when no recurrence is detected within n iterates.
std::optional<RotationNumber> rotation_number(const LiftedMap& map, const Point& seed, int n,
                                              const Rational& eps);

/// Real number or one of the two infinities.
struct Extended {
  enum class Kind { NegInf, Finite, PosInf };
  Kind kind = Kind::Finite;
  Rational value;

  static Extended finite(Rational v) { return {Kind::Finite, std::move(v)}; }
  static Extended neg_inf() { return {Kind::NegInf, Rational(0)}; }
  static Extended pos_inf() { return {Kind::PosInf, Rational(0)}; }
  bool is_finite() const { return kind == Kind::Finite; }
  std::string str() const;
  friend bool operator==(const Extended&, const Extended&) = default;
};

struct RhoBounds {
  Extended lo;
  Extended hi;
};

struct DivergenceRule {
  bool enabled = false;
  /// Averages beyond this magnitude with a monotone tail emit an infinity.
  Rational threshold{10};
};

/// inf / sup of d_m / m over recurrence times m. Throws NoRecurrenceDetected.
RhoBounds rho_bounds(const LiftedMap& map, const Point& seed, int n, const Rational& eps,
                     const DivergenceRule& divergence = {});

struct SeedRecord {
  Point seed;
  std::optional<Rational> lo;    // hull of d_n / n over revisits in the tail window
  std::optional<Rational> hi;
  std::optional<Rational> last;  // value at the last revisit
  int revisits = 0;
  std::vector<int> revisit_times;  // capped list, for reports
};

struct RotationEstimate {
  Rational lo;  // outer bound: hull over every tail revisit
  Rational hi;
  Rational inner_lo;  // hull of values achieved at each seed's last revisit
  Rational inner_hi;
  Rational band_lo;
  Rational band_hi;
  int n_max = 0;
  int tail_start = 0;
  int grid = 0;
  std::vector<SeedRecord> samples;
};

/// Weak rotation set over the band [band_lo, band_hi]. Seeds form a grid x grid
/// lattice in [0, 1) x [band_lo, band_hi]; a revisit is a time n with
/// F^n(z) back in the band. Values are collected for n >= tail_start
/// (default n_max / 2). Throws EmptyReturns if nothing revisits.
RotationEstimate weak_rotation_set(const LiftedMap& map, const Rational& band_lo,
                                   const Rational& band_hi, int n_max, int grid,
                                   std::optional<int> tail_start = std::nullopt);

struct Window {
  Rational xlo, xhi, ylo, yhi;
};

/// Searches for z with |F^q(z) - T^p(z)|_inf <= tol, target = p/q.
std::optional<Point> find_periodic_point(const LiftedMap& map, const Rational& target,
                                         const Window& window, const Rational& tol,
                                         int grid = 32);

}  // namespace annulus::rotation
