#include "annulus/rotation.hpp"

#include <algorithm>

#include "annulus/error.hpp"
#include "annulus/parallel.hpp"

namespace annulus::rotation {

namespace {

constexpr size_t kRevisitListCap = 64;

}  // namespace

Rational quotient_distance(const Point& a, const Point& b, long modulus) {
  const Rational r = (a.x - b.x).mod(modulus);
  const Rational dx = min(r, Rational(modulus) - r);
  return max(dx, (a.y - b.y).abs());
}

std::string Extended::str() const {
  switch (kind) {
    case Kind::NegInf: return "-inf";
    case Kind::PosInf: return "+inf";
    case Kind::Finite: break;
  }
  return value.str();
}

OrbitSample orbit_with_recurrence(const LiftedMap& map, const Point& seed, int n,
                                  const Rational& eps, long cover_modulus) {
  if (n < 1) throw Error(ErrorCode::InvalidInput, "orbit length must be positive");
  if (eps <= Rational(0)) throw Error(ErrorCode::InvalidInput, "eps must be positive");
  if (cover_modulus < 1) throw Error(ErrorCode::InvalidInput, "cover modulus must be positive");
  OrbitSample out;
  out.seed = seed;
  out.length = n;
  out.cover_modulus = static_cast<int>(cover_modulus);
  out.displacements.reserve(n);
  Point z = seed;
  for (int k = 1; k <= n; ++k) {
    z = map.apply(z);
    out.displacements.push_back(z.x - seed.x);
    if (quotient_distance(z, seed, cover_modulus) < eps) out.recurrence_times.push_back(k);
  }
  return out;
}

std::optional<RotationNumber> rotation_number(const LiftedMap& map, const Point& seed, int n,
                                              const Rational& eps) {
  const OrbitSample orbit = orbit_with_recurrence(map, seed, n, eps);
  if (orbit.recurrence_times.empty()) return std::nullopt;
  Rational lo, hi;
  bool first = true;
  for (int m : orbit.recurrence_times) {
    const Rational avg = orbit.displacements[m - 1] / Rational(m);
    if (first || avg < lo) lo = avg;
    if (first || avg > hi) hi = avg;
    first = false;
  }
  const int m = orbit.recurrence_times.back();
  return RotationNumber{orbit.displacements[m - 1] / Rational(m), hi - lo, m};
}

RhoBounds rho_bounds(const LiftedMap& map, const Point& seed, int n, const Rational& eps,
                     const DivergenceRule& divergence) {
  const OrbitSample orbit = orbit_with_recurrence(map, seed, n, eps);
  if (orbit.recurrence_times.empty())
    throw Error(ErrorCode::NoRecurrenceDetected,
                "no return within eps after " + std::to_string(n) + " iterates");
  std::vector<Rational> avgs;
  for (int m : orbit.recurrence_times) avgs.push_back(orbit.displacements[m - 1] / Rational(m));
  RhoBounds b{Extended::finite(*std::min_element(avgs.begin(), avgs.end())),
              Extended::finite(*std::max_element(avgs.begin(), avgs.end()))};
  if (divergence.enabled && avgs.size() >= 3) {
    const size_t from = avgs.size() / 2;
    bool up = true, down = true;
    for (size_t i = from + 1; i < avgs.size(); ++i) {
      up = up && avgs[i - 1] < avgs[i];
      down = down && avgs[i - 1] > avgs[i];
    }
    if (up && avgs.back() > divergence.threshold) b.hi = Extended::pos_inf();
    if (down && avgs.back() < -divergence.threshold) b.lo = Extended::neg_inf();
  }
  return b;
}

RotationEstimate weak_rotation_set(const LiftedMap& map, const Rational& band_lo,
                                   const Rational& band_hi, int n_max, int grid,
                                   std::optional<int> tail_start) {
  if (!(band_lo < band_hi)) throw Error(ErrorCode::InvalidInput, "band must satisfy a < b");
  if (n_max < 1 || grid < 1) throw Error(ErrorCode::InvalidInput, "n_max and grid must be positive");
  const int start = std::clamp(tail_start.value_or(std::max(1, n_max / 2)), 1, n_max);

  std::vector<Point> seeds;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      const Rational y = grid == 1 ? band_lo
                                   : band_lo + (band_hi - band_lo) * Rational(j, grid - 1);
      seeds.push_back({Rational(i, grid), y});
    }

  std::vector<SeedRecord> records(seeds.size());
  parallel_for(seeds.size(), [&](size_t s) {
    SeedRecord& rec = records[s];
    rec.seed = seeds[s];
    Point z = seeds[s];
    for (int n = 1; n <= n_max; ++n) {
      z = map.apply(z);
      if (n < start || z.y < band_lo || z.y > band_hi) continue;
      const Rational v = (z.x - rec.seed.x) / Rational(n);
      if (!rec.lo || v < *rec.lo) rec.lo = v;
      if (!rec.hi || v > *rec.hi) rec.hi = v;
      rec.last = v;
      ++rec.revisits;
      if (rec.revisit_times.size() < kRevisitListCap) rec.revisit_times.push_back(n);
    }
  });

  RotationEstimate est;
  est.band_lo = band_lo;
  est.band_hi = band_hi;
  est.n_max = n_max;
  est.tail_start = start;
  est.grid = grid;
  bool any = false;
  for (const SeedRecord& rec : records) {
    if (!rec.lo) continue;
    if (!any) {
      est.lo = *rec.lo;
      est.hi = *rec.hi;
      est.inner_lo = est.inner_hi = *rec.last;
      any = true;
      continue;
    }
    est.lo = min(est.lo, *rec.lo);
    est.hi = max(est.hi, *rec.hi);
    est.inner_lo = min(est.inner_lo, *rec.last);
    est.inner_hi = max(est.inner_hi, *rec.last);
  }
  if (!any)
    throw Error(ErrorCode::EmptyReturns, "no sampled orbit revisits the band after time " +
                                             std::to_string(start));
  est.samples = std::move(records);
  return est;
}

std::optional<Point> find_periodic_point(const LiftedMap& map, const Rational& target,
                                         const Window& window, const Rational& tol, int grid) {
  if (grid < 1) throw Error(ErrorCode::InvalidInput, "grid must be positive");
  if (!(window.xlo <= window.xhi) || !(window.ylo < window.yhi))
    throw Error(ErrorCode::InvalidInput, "empty window");
  const long p = target.num().get_si();
  const long q = target.den().get_si();
  const LiftedMap gq = LiftedMap::make(
      MapDescriptor::compose({MapDescriptor::deck(-p), MapDescriptor::power(map.descriptor(), q)}));

  auto residual = [&](const Point& z) { return gq.apply(z) - z; };
  auto good = [&](const Point& r) { return max(r.x.abs(), r.y.abs()) <= tol; };

  for (int i = 0; i <= grid; ++i) {
    const Rational x = window.xlo + (window.xhi - window.xlo) * Rational(i, grid);
    std::optional<Point> prev_z, prev_r;
    for (int j = 0; j <= grid; ++j) {
      const Point z{x, window.ylo + (window.yhi - window.ylo) * Rational(j, grid)};
      const Point r = residual(z);
      if (good(r)) return z;
      if (prev_r && prev_r->x.sign() * r.x.sign() < 0) {
        // Bracketed sign change of the x-residual along this fibre.
        Rational ya = prev_z->y, yb = z.y;
        Rational ra = prev_r->x, rb = r.x;
        for (int it = 0; it < 200; ++it) {
          const Rational y = it % 2 == 0 ? ya - ra * (yb - ya) / (rb - ra) : midpoint(ya, yb);
          const Point c{x, y};
          const Point rc = residual(c);
          if (good(rc)) return c;
          if (rc.x.sign() == 0) break;
          if (rc.x.sign() == ra.sign()) {
            ya = y;
            ra = rc.x;
          } else {
            yb = y;
            rb = rc.x;
          }
        }
      }
      prev_z = z;
      prev_r = r;
    }
  }
  return std::nullopt;
}

}  // namespace annulus::rotation
