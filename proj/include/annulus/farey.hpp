#pragma once

// Farey intervals, Stern-Brocot enclosure and the rigid-rotation cyclic
// order used as a reference for the ordering of iterated lines.

#include <vector>

#include "annulus/rational.hpp"

namespace annulus::farey {

/// Open interval ]left, right[ whose endpoints satisfy q*p' - p*q' = 1.
struct FareyInterval {
  Rational left;
  Rational right;

  /// Validating constructor; throws InvalidInput unless the determinant is 1.
  static FareyInterval make(const Rational& left, const Rational& right);

  Rational mediant() const;
  bool contains(const Rational& rho) const { return left < rho && rho < right; }
  /// Splits at the mediant into two Farey intervals.
  std::pair<FareyInterval, FareyInterval> split() const;

  friend bool operator==(const FareyInterval&, const FareyInterval&) = default;
};

/// Cyclic permutation of {0, ..., n}, stored starting from index 0.
struct CyclicOrder {
  std::vector<int> permutation;

  /// Rotates an arbitrary cyclic listing so that it starts at 0.
  static CyclicOrder canonical(std::vector<int> cycle);

  friend bool operator==(const CyclicOrder&, const CyclicOrder&) = default;
};

/// Determinant test q*p' - p*q' == 1 for reduced a = p/q < b = p'/q'.
bool is_farey_interval(const Rational& a, const Rational& b);

/// The mediant (p + p') / (q + q').
Rational mediant(const Rational& a, const Rational& b);

/// Descends the Stern-Brocot tree `depth` times from (floor(rho), floor(rho)+1).
/// Throws RhoIsMediant if rho hits a mediant on the way.
FareyInterval stern_brocot_enclose(const Rational& rho, int depth);

/// Indices 0..n sorted by the fractional part of i*rho. Throws Collision if
/// two fractional parts coincide.
CyclicOrder rotation_cyclic_order(const Rational& rho, int n);

}  // namespace annulus::farey
