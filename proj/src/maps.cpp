#include "annulus/maps.hpp"

#include <algorithm>

#include "annulus/error.hpp"

namespace annulus {

// ---------------------------------------------------------------------------
// PiecewiseLinear

namespace {

Rational interpolate(const std::pair<Rational, Rational>& a, const std::pair<Rational, Rational>& b,
                     const Rational& t) {
  return a.second + (t - a.first) * (b.second - a.second) / (b.first - a.first);
}

Rational slope(const std::pair<Rational, Rational>& a, const std::pair<Rational, Rational>& b) {
  return (b.second - a.second) / (b.first - a.first);
}

}  // namespace

PiecewiseLinear::PiecewiseLinear(std::vector<std::pair<Rational, Rational>> breaks) {
  if (breaks.empty()) throw Error(ErrorCode::InvalidInput, "PL function needs breakpoints");
  std::sort(breaks.begin(), breaks.end(),
            [](const auto& u, const auto& v) { return u.first < v.first; });
  for (size_t i = 1; i < breaks.size(); ++i)
    if (breaks[i].first == breaks[i - 1].first)
      throw Error(ErrorCode::NotInvertible, "PL function has two values at " +
                                                breaks[i].first.str());
  // Drop breakpoints that do not bend the graph.
  std::vector<std::pair<Rational, Rational>> kept;
  for (size_t i = 0; i < breaks.size(); ++i) {
    const Rational left = i == 0 ? Rational(0) : slope(breaks[i - 1], breaks[i]);
    const Rational right = i + 1 == breaks.size() ? Rational(0) : slope(breaks[i], breaks[i + 1]);
    if (left != right) kept.push_back(breaks[i]);
  }
  if (kept.empty()) kept.push_back({Rational(0), breaks.front().second});
  breaks_ = std::move(kept);
}

PiecewiseLinear PiecewiseLinear::constant(const Rational& c) {
  return PiecewiseLinear({{Rational(0), c}});
}

Rational PiecewiseLinear::operator()(const Rational& t) const {
  if (t <= breaks_.front().first) return breaks_.front().second;
  if (t >= breaks_.back().first) return breaks_.back().second;
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t,
                                   [](const Rational& v, const auto& b) { return v < b.first; });
  return interpolate(*(it - 1), *it, t);
}

std::vector<Rational> PiecewiseLinear::kinks() const {
  std::vector<Rational> out;
  if (breaks_.size() == 1) return out;
  for (const auto& b : breaks_) out.push_back(b.first);
  return out;
}

Rational PiecewiseLinear::sup_abs() const {
  Rational m(0);
  for (const auto& b : breaks_) m = max(m, b.second.abs());
  return m;
}

bool PiecewiseLinear::is_zero() const {
  return breaks_.size() == 1 && breaks_.front().second == Rational(0);
}

PiecewiseLinear PiecewiseLinear::operator+(const PiecewiseLinear& o) const {
  std::vector<Rational> ts;
  for (const auto& b : breaks_) ts.push_back(b.first);
  for (const auto& b : o.breaks_) ts.push_back(b.first);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  std::vector<std::pair<Rational, Rational>> out;
  for (const Rational& t : ts) out.emplace_back(t, (*this)(t) + o(t));
  return PiecewiseLinear(std::move(out));
}

PiecewiseLinear PiecewiseLinear::operator-() const {
  auto out = breaks_;
  for (auto& b : out) b.second = -b.second;
  return PiecewiseLinear(std::move(out));
}

// ---------------------------------------------------------------------------
// PeriodicPL

PeriodicPL::PeriodicPL(std::vector<std::pair<Rational, Rational>> breaks) {
  if (breaks.empty()) throw Error(ErrorCode::InvalidInput, "periodic PL function needs breakpoints");
  std::sort(breaks.begin(), breaks.end(),
            [](const auto& u, const auto& v) { return u.first < v.first; });
  for (size_t i = 0; i < breaks.size(); ++i) {
    if (breaks[i].first < Rational(0) || breaks[i].first >= Rational(1))
      throw Error(ErrorCode::InvalidInput, "periodic breakpoints must lie in [0, 1)");
    if (i > 0 && breaks[i].first == breaks[i - 1].first)
      throw Error(ErrorCode::NotInvertible, "periodic PL function has two values at " +
                                                breaks[i].first.str());
  }
  breaks_ = std::move(breaks);
  // Drop breakpoints that do not bend the (cyclic) graph.
  const size_t n = breaks_.size();
  if (n > 1) {
    std::vector<std::pair<Rational, Rational>> kept;
    for (size_t i = 0; i < n; ++i) {
      auto prev = breaks_[(i + n - 1) % n];
      auto next = breaks_[(i + 1) % n];
      if (i == 0) prev.first -= Rational(1);
      if (i + 1 == n) next.first += Rational(1);
      if (slope(prev, breaks_[i]) != slope(breaks_[i], next)) kept.push_back(breaks_[i]);
    }
    if (kept.empty()) kept.push_back({Rational(0), breaks_.front().second});
    breaks_ = std::move(kept);
  }
}

PeriodicPL PeriodicPL::constant(const Rational& c) { return PeriodicPL({{Rational(0), c}}); }

Rational PeriodicPL::operator()(const Rational& x) const {
  const size_t n = breaks_.size();
  if (n == 1) return breaks_.front().second;
  const Rational u = x.frac();
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), u,
                                   [](const Rational& v, const auto& b) { return v < b.first; });
  if (it == breaks_.begin()) {
    auto prev = breaks_.back();
    prev.first -= Rational(1);
    return interpolate(prev, breaks_.front(), u);
  }
  if (it == breaks_.end()) {
    auto next = breaks_.front();
    next.first += Rational(1);
    return interpolate(breaks_.back(), next, u);
  }
  return interpolate(*(it - 1), *it, u);
}

std::vector<Rational> PeriodicPL::kinks_between(const Rational& lo, const Rational& hi) const {
  std::vector<Rational> out;
  if (breaks_.size() == 1 || !(lo < hi)) return out;
  const mpz_class k0 = lo.floor() - 1;
  const mpz_class k1 = hi.floor() + 1;
  for (mpz_class k = k0; k <= k1; ++k)
    for (const auto& b : breaks_) {
      const Rational t = b.first + Rational(mpq_class(k));
      if (lo < t && t < hi) out.push_back(t);
    }
  std::sort(out.begin(), out.end());
  return out;
}

Rational PeriodicPL::sup_abs() const {
  Rational m(0);
  for (const auto& b : breaks_) m = max(m, b.second.abs());
  return m;
}

bool PeriodicPL::is_zero() const {
  return breaks_.size() == 1 && breaks_.front().second == Rational(0);
}

PeriodicPL PeriodicPL::operator+(const PeriodicPL& o) const {
  std::vector<Rational> ts;
  for (const auto& b : breaks_) ts.push_back(b.first);
  for (const auto& b : o.breaks_) ts.push_back(b.first);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  std::vector<std::pair<Rational, Rational>> out;
  for (const Rational& t : ts) out.emplace_back(t, (*this)(t) + o(t));
  return PeriodicPL(std::move(out));
}

PeriodicPL PeriodicPL::operator-() const {
  auto out = breaks_;
  for (auto& b : out) b.second = -b.second;
  return PeriodicPL(std::move(out));
}

// ---------------------------------------------------------------------------
// LiftedMap

namespace {

bool step_is_zero(const MapStep& s) {
  return std::visit([](const auto& v) {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, TwistStep>)
      return v.tau.is_zero();
    else
      return v.sigma.is_zero();
  }, s);
}

void push_step(std::vector<MapStep>& steps, MapStep step) {
  if (step_is_zero(step)) return;
  if (!steps.empty() && steps.back().index() == step.index()) {
    if (auto* t = std::get_if<TwistStep>(&steps.back()))
      t->tau = t->tau + std::get<TwistStep>(step).tau;
    else {
      auto& s = std::get<ShearStep>(steps.back());
      s.sigma = s.sigma + std::get<ShearStep>(step).sigma;
    }
    if (step_is_zero(steps.back())) steps.pop_back();
    return;
  }
  steps.push_back(std::move(step));
}

MapStep invert_step(const MapStep& s) {
  if (const auto* t = std::get_if<TwistStep>(&s)) return TwistStep{-t->tau};
  return ShearStep{-std::get<ShearStep>(s).sigma};
}

std::vector<MapStep> inverted(const std::vector<MapStep>& steps) {
  std::vector<MapStep> out;
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) push_step(out, invert_step(*it));
  return out;
}

// Steps in application order (first applied first).
void flatten(const MapDescriptor& desc, std::vector<MapStep>& out) {
  std::visit(
      [&](const auto& node) {
        using N = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<N, MapDescriptor::Rotation>) {
          push_step(out, TwistStep{PiecewiseLinear::constant(node.rho)});
        } else if constexpr (std::is_same_v<N, MapDescriptor::Deck>) {
          push_step(out, TwistStep{PiecewiseLinear::constant(Rational(node.k))});
        } else if constexpr (std::is_same_v<N, MapDescriptor::Twist>) {
          if (node.linear_tails)
            throw Error(ErrorCode::NotEventuallyRigid,
                        "twist profile must be constant outside a bounded range");
          push_step(out, TwistStep{node.tau});
        } else if constexpr (std::is_same_v<N, MapDescriptor::Shear>) {
          push_step(out, ShearStep{PeriodicPL(node.sigma)});
        } else if constexpr (std::is_same_v<N, MapDescriptor::Compose>) {
          for (auto it = node.maps.rbegin(); it != node.maps.rend(); ++it) flatten(*it, out);
        } else if constexpr (std::is_same_v<N, MapDescriptor::Power>) {
          if (!node.base) throw Error(ErrorCode::InvalidInput, "power without base");
          std::vector<MapStep> base;
          flatten(*node.base, base);
          if (node.k < 0) base = inverted(base);
          const long reps = node.k < 0 ? -node.k : node.k;
          for (long r = 0; r < reps; ++r)
            for (const MapStep& s : base) push_step(out, s);
        }
      },
      desc.node);
}

Point apply_step(const MapStep& step, const Point& p) {
  if (const auto* t = std::get_if<TwistStep>(&step)) return {p.x + t->tau(p.y), p.y};
  return {p.x, p.y + std::get<ShearStep>(step).sigma(p.x)};
}

std::vector<Point> polyline_step(const MapStep& step, std::span<const Point> pts, size_t budget) {
  std::vector<Point> refined;
  refined.reserve(pts.size());
  const auto* twist = std::get_if<TwistStep>(&step);
  const std::vector<Rational> tau_kinks = twist ? twist->tau.kinks() : std::vector<Rational>{};
  for (size_t i = 0; i < pts.size(); ++i) {
    refined.push_back(pts[i]);
    if (i + 1 == pts.size()) break;
    const Point& p = pts[i];
    const Point& q = pts[i + 1];
    std::vector<Rational> ts;
    if (twist) {
      if (p.y != q.y) {
        const Rational lo = min(p.y, q.y), hi = max(p.y, q.y);
        for (const Rational& k : tau_kinks)
          if (lo < k && k < hi) ts.push_back((k - p.y) / (q.y - p.y));
      }
    } else if (p.x != q.x) {
      const auto& sigma = std::get<ShearStep>(step).sigma;
      for (const Rational& k : sigma.kinks_between(min(p.x, q.x), max(p.x, q.x)))
        ts.push_back((k - p.x) / (q.x - p.x));
    }
    std::sort(ts.begin(), ts.end());
    for (const Rational& t : ts) refined.push_back(p + t * (q - p));
    if (refined.size() > budget)
      throw Error(ErrorCode::SubdivisionOverflow,
                  "image needs more than " + std::to_string(budget) + " vertices");
  }
  for (Point& p : refined) p = apply_step(step, p);
  return refined;
}

std::pair<Rational, Rational> step_kink_range(const MapStep& step) {
  if (const auto* t = std::get_if<TwistStep>(&step)) {
    const auto k = t->tau.kinks();
    if (!k.empty()) return {k.front(), k.back()};
  }
  return {Rational(0), Rational(0)};
}

}  // namespace

LiftedMap LiftedMap::make(const MapDescriptor& desc) {
  LiftedMap m;
  m.desc_ = desc;
  flatten(desc, m.steps_);
  m.finalize();
  return m;
}

LiftedMap LiftedMap::identity() { return make(MapDescriptor::compose({})); }

LiftedMap LiftedMap::translation(const Rational& dx) { return make(MapDescriptor::rotation(dx)); }

void LiftedMap::finalize() {
  displacement_ = Rational(0);
  shift_below_ = Rational(0);
  shift_above_ = Rational(0);
  Rational kink_extent(0);
  Rational vertical(0);
  bool has_kinks = false;
  for (const MapStep& s : steps_) {
    if (const auto* t = std::get_if<TwistStep>(&s)) {
      displacement_ += t->tau.sup_abs();
      shift_below_ += t->tau.at_minus_infinity();
      shift_above_ += t->tau.at_plus_infinity();
      for (const Rational& k : t->tau.kinks()) {
        kink_extent = max(kink_extent, k.abs());
        has_kinks = true;
      }
    } else {
      const Rational s_abs = std::get<ShearStep>(s).sigma.sup_abs();
      displacement_ += s_abs;
      vertical += s_abs;
    }
  }
  threshold_ = has_kinks ? kink_extent + vertical : Rational(0);
}

bool LiftedMap::is_twist_type() const {
  return std::all_of(steps_.begin(), steps_.end(),
                     [](const MapStep& s) { return std::holds_alternative<TwistStep>(s); });
}

Point LiftedMap::apply(const Point& p) const {
  Point q = p;
  for (const MapStep& s : steps_) q = apply_step(s, q);
  return q;
}

Point LiftedMap::apply_inverse(const Point& p) const {
  Point q = p;
  for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) q = apply_step(invert_step(*it), q);
  return q;
}

LiftedMap LiftedMap::inverse() const { return power(-1); }

LiftedMap LiftedMap::power(long k) const { return make(MapDescriptor::power(desc_, k)); }

LiftedMap LiftedMap::after(const LiftedMap& other) const {
  return make(MapDescriptor::compose({desc_, other.desc_}));
}

std::vector<Point> LiftedMap::apply_to_polyline(std::span<const Point> pts, bool closed,
                                                size_t budget) const {
  std::vector<Point> cur(pts.begin(), pts.end());
  if (closed && !cur.empty()) cur.push_back(cur.front());
  for (const MapStep& s : steps_) cur = polyline_step(s, cur, budget);
  if (closed && !cur.empty()) cur.pop_back();
  return cur;
}

Polygon LiftedMap::apply_to_polygon(const Polygon& poly, size_t budget) const {
  return apply_to_polyline(poly, true, budget);
}

EssentialLine LiftedMap::apply_to_line(const EssentialLine& line, size_t budget) const {
  EssentialLine cur = line;
  for (const MapStep& s : steps_) {
    const auto [klo, khi] = step_kink_range(s);
    const Rational ylo = min(cur.min_y(), klo) - Rational(1);
    const Rational yhi = max(cur.max_y(), khi) + Rational(1);
    const auto pts = cur.clipped(ylo, yhi);
    cur = EssentialLine::through(polyline_step(s, pts, budget));
  }
  return cur;
}

namespace maps {

Rational linf(const Point& a, const Point& b) {
  return max((a.x - b.x).abs(), (a.y - b.y).abs());
}

OrderVerdict is_brouwer_line(const LiftedMap& map, const EssentialLine& line) {
  const OrderVerdict v = lines::compare(line, map.apply_to_line(line));
  if (v == OrderVerdict::StrictlyLess) {
    const EssentialLine back = map.inverse().apply_to_line(line);
    if (lines::compare(back, line) != OrderVerdict::StrictlyLess)
      throw Error(ErrorCode::VerificationFailed, "F^-1(line) < line fails although line < F(line)");
  }
  return v;
}

}  // namespace maps
}  // namespace annulus
