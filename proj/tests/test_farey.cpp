#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "annulus/error.hpp"
#include "annulus/farey.hpp"
#include "support.hpp"

using namespace annulus;
using namespace annulus::farey;
using testing_support::R;

namespace {

// Plain integer determinant, independent of the library.
long long det(long long p, long long q, long long pp, long long qq) { return q * pp - p * qq; }

// Neighbouring pairs of the Farey sequence of order n in [0, 1].
std::vector<std::pair<Rational, Rational>> farey_neighbours(long n) {
  std::vector<std::pair<long, long>> seq;
  long a = 0, b = 1, c = 1, d = n;
  seq.push_back({a, b});
  while (c <= n) {
    const long k = (n + b) / d;
    const long e = k * c - a, f = k * d - b;
    a = c, b = d, c = e, d = f;
    seq.push_back({a, b});
  }
  std::vector<std::pair<Rational, Rational>> out;
  for (size_t i = 0; i + 1 < seq.size(); ++i)
    out.push_back({Rational(seq[i].first, seq[i].second),
                   Rational(seq[i + 1].first, seq[i + 1].second)});
  return out;
}

}  // namespace

TEST(Farey, DeterminantExamples) {
  EXPECT_TRUE(is_farey_interval(R("1/3"), R("1/2")));
  EXPECT_TRUE(is_farey_interval(R("0"), R("1")));
  EXPECT_FALSE(is_farey_interval(R("1/3"), R("2/3")));
  EXPECT_EQ(det(1, 3, 2, 3), 3);
}

TEST(Farey, EncloseSqrtTwoMinusOne) {
  // 0.41421356237 stands in for sqrt(2) - 1 at this depth.
  const Rational rho = R("0.41421356237");
  const auto iv = stern_brocot_enclose(rho, 4);
  EXPECT_EQ(iv.left, R("2/5"));
  EXPECT_EQ(iv.right, R("3/7"));
  EXPECT_TRUE(iv.contains(rho));
}

TEST(Farey, EncloseOneStep) {
  const auto iv = stern_brocot_enclose(R("0.400000001"), 1);
  EXPECT_EQ(iv.left, R("0"));
  EXPECT_EQ(iv.right, R("1/2"));
}

TEST(Farey, EncloseHitsMediant) {
  for (int depth : {1, 3, 7}) {
    try {
      stern_brocot_enclose(R("1/2"), depth);
      FAIL() << "expected RhoIsMediant";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::RhoIsMediant);
    }
  }
}

TEST(Farey, EncloseShiftsByFloor) {
  const auto iv = stern_brocot_enclose(R("-1.6"), 2);
  EXPECT_EQ(iv.left, R("-5/3"));
  EXPECT_EQ(iv.right, R("-3/2"));
}

TEST(Farey, CyclicOrderExamples) {
  EXPECT_EQ(rotation_cyclic_order(R("2/5"), 4).permutation, (std::vector<int>{0, 3, 1, 4, 2}));
  EXPECT_EQ(rotation_cyclic_order(R("1/3"), 1).permutation, (std::vector<int>{0, 1}));
  try {
    rotation_cyclic_order(R("2/5"), 5);
    FAIL() << "expected Collision";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Collision);
  }
}

TEST(Farey, CanonicalRotation) {
  EXPECT_EQ(CyclicOrder::canonical({3, 1, 4, 2, 0}).permutation,
            (std::vector<int>{0, 3, 1, 4, 2}));
}

TEST(Farey, MakeRejectsBadDeterminant) {
  EXPECT_THROW(FareyInterval::make(R("1/3"), R("2/3")), Error);
  EXPECT_NO_THROW(FareyInterval::make(R("1/3"), R("1/2")));
}

// Every rational with denominator <= 50 inside a Farey interval yields the
// same cyclic order of the first q + q' points.
TEST(FareyProperty, OrderConstantOnInterval) {
  int checked = 0;
  for (const auto& [a, b] : farey_neighbours(7)) {
    const auto iv = FareyInterval::make(a, b);
    const int n = static_cast<int>(a.den().get_si() + b.den().get_si()) - 1;
    std::optional<CyclicOrder> first;
    for (long den = 2; den <= 50; ++den)
      for (long num = 0; num <= den; ++num) {
        const Rational rho(num, den);
        if (!iv.contains(rho)) continue;
        // Independent oracle: sort i by (i * num mod den).
        std::vector<int> idx(n + 1);
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(),
                  [&](int i, int j) { return (i * num) % den < (j * num) % den; });
        const auto got = rotation_cyclic_order(rho, n);
        EXPECT_EQ(got.permutation, idx);
        if (!first) first = got;
        EXPECT_EQ(got, *first) << "interval " << a << " " << b << " rho " << rho;
        ++checked;
      }
  }
  EXPECT_GT(checked, 300);
}

TEST(FareyProperty, EncloseIsFareyAndContains) {
  testing_support::Gen gen(11);
  for (int trial = 0; trial < 300; ++trial) {
    const Rational rho = gen.rational(-3, 3, 9973);
    const int depth = static_cast<int>(gen.integer(1, 12));
    try {
      const auto iv = stern_brocot_enclose(rho, depth);
      EXPECT_TRUE(is_farey_interval(iv.left, iv.right));
      EXPECT_TRUE(iv.contains(rho));
      const long long p = iv.left.num().get_si(), q = iv.left.den().get_si();
      const long long pp = iv.right.num().get_si(), qq = iv.right.den().get_si();
      EXPECT_EQ(det(p, q, pp, qq), 1);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::RhoIsMediant);
      EXPECT_LE(rho.den().get_si(), 1L << 13);
    }
  }
}

TEST(FareyProperty, MediantSplitKeepsDeterminant) {
  for (const auto& [a, b] : farey_neighbours(12)) {
    const auto [lo, hi] = FareyInterval::make(a, b).split();
    EXPECT_TRUE(is_farey_interval(lo.left, lo.right));
    EXPECT_TRUE(is_farey_interval(hi.left, hi.right));
    EXPECT_EQ(lo.right, hi.left);
    EXPECT_EQ(lo.right, mediant(a, b));
  }
}
