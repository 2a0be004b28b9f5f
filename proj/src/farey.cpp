#include "annulus/farey.hpp"

#include <algorithm>
#include <numeric>

#include "annulus/error.hpp"

namespace annulus::farey {

bool is_farey_interval(const Rational& a, const Rational& b) {
  if (!(a < b)) return false;
  return b.num() * a.den() - a.num() * b.den() == 1;
}

Rational mediant(const Rational& a, const Rational& b) {
  return Rational(mpq_class(a.num() + b.num(), a.den() + b.den()));
}

FareyInterval FareyInterval::make(const Rational& left, const Rational& right) {
  if (!is_farey_interval(left, right))
    throw Error(ErrorCode::InvalidInput,
                "(" + left.str() + ", " + right.str() + ") is not a Farey interval");
  return FareyInterval{left, right};
}

Rational FareyInterval::mediant() const { return farey::mediant(left, right); }

std::pair<FareyInterval, FareyInterval> FareyInterval::split() const {
  const Rational m = mediant();
  return {FareyInterval{left, m}, FareyInterval{m, right}};
}

CyclicOrder CyclicOrder::canonical(std::vector<int> cycle) {
  const auto zero = std::find(cycle.begin(), cycle.end(), 0);
  if (zero != cycle.end()) std::rotate(cycle.begin(), zero, cycle.end());
  return CyclicOrder{std::move(cycle)};
}

FareyInterval stern_brocot_enclose(const Rational& rho, int depth) {
  if (depth < 0) throw Error(ErrorCode::InvalidInput, "negative depth");
  const Rational base(mpq_class(rho.floor()));
  if (base == rho)
    throw Error(ErrorCode::RhoIsMediant, "rho " + rho.str() + " is an integer endpoint");
  FareyInterval interval{base, base + Rational(1)};
  for (int step = 0; step < depth; ++step) {
    const Rational m = interval.mediant();
    if (m == rho)
      throw Error(ErrorCode::RhoIsMediant,
                  "rho " + rho.str() + " is the mediant at step " + std::to_string(step + 1));
    if (rho < m)
      interval.right = m;
    else
      interval.left = m;
  }
  return interval;
}

CyclicOrder rotation_cyclic_order(const Rational& rho, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidInput, "n must be positive");
  std::vector<Rational> fracs;
  fracs.reserve(n + 1);
  for (int i = 0; i <= n; ++i) fracs.push_back((Rational(i) * rho).frac());
  std::vector<int> idx(n + 1);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fracs[a] < fracs[b]; });
  for (int k = 1; k <= n; ++k) {
    if (fracs[idx[k]] == fracs[idx[k - 1]])
      throw Error(ErrorCode::Collision, "i*rho mod 1 coincides for i=" +
                                            std::to_string(idx[k - 1]) + " and i=" +
                                            std::to_string(idx[k]));
  }
  return CyclicOrder::canonical(std::move(idx));
}

}  // namespace annulus::farey
