#pragma once

// Small helpers shared by the test binaries: literal parsing and seeded
// generators for random rationals, points and graph lines.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "annulus/geometry.hpp"
#include "annulus/lines.hpp"
#include "annulus/maps.hpp"
#include "annulus/rational.hpp"

namespace testing_support {

using annulus::EssentialLine;
using annulus::Point;
using annulus::Rational;

inline Rational R(const std::string& s) { return Rational::parse(s); }
inline Point P(const std::string& x, const std::string& y) { return {R(x), R(y)}; }

class Gen {
 public:
  explicit Gen(unsigned seed) : rng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

  /// Random rational in [lo, hi] with denominator dividing `den`.
  Rational rational(long lo, long hi, long den) {
    return Rational(integer(lo * den, hi * den), den);
  }

  Point point(long lo, long hi, long den) { return {rational(lo, hi, den), rational(lo, hi, den)}; }

  /// Graph-class line x = g(y) with 1..max_breaks breakpoints.
  EssentialLine graph_line(int max_breaks, long xlo, long xhi, long den) {
    const int k = static_cast<int>(integer(1, max_breaks));
    std::vector<Rational> ys;
    while (static_cast<int>(ys.size()) < k) {
      const Rational y = rational(-4, 4, den);
      if (std::find(ys.begin(), ys.end(), y) == ys.end()) ys.push_back(y);
    }
    std::sort(ys.begin(), ys.end());
    std::vector<std::pair<Rational, Rational>> breaks;
    for (const Rational& y : ys) breaks.emplace_back(y, rational(xlo, xhi, den));
    return EssentialLine::graph(breaks);
  }

  std::mt19937& engine() { return rng_; }

 private:
  std::mt19937 rng_;
};

/// x = clamp(y, -1, 1), the model twist profile.
inline annulus::MapDescriptor clamp_twist() {
  return annulus::MapDescriptor::twist({{R("-1"), R("-1")}, {R("1"), R("1")}});
}

/// Twist whose profile runs from 7/20 at y = -1 to 9/20 at y = 1.
inline annulus::MapDescriptor band_twist() {
  return annulus::MapDescriptor::twist({{R("-1"), R("7/20")}, {R("1"), R("9/20")}});
}

}  // namespace testing_support
