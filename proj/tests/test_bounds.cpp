#include <gtest/gtest.h>

#include <random>
#include <set>

#include "seshadri/bounds.hpp"

using namespace seshadri;

namespace {

const std::vector<OrderSpec>& orders() {
  static const std::vector<OrderSpec> os{OrderSpec(Ring::Sqrt, 2), OrderSpec(Ring::Sqrt, 3), OrderSpec(Ring::Half, 5),
                                         OrderSpec(Ring::Half, 33)};
  return os;
}

// reduced fractions a/b, b <= bmax, in the open nef interval with non-square
// L^2
std::vector<Rat> usable(const OrderSpec& o, long bmax) {
  auto [lo, hi] = nef_interval(o);
  std::vector<Rat> out;
  for (long b = 1; b <= bmax; ++b) {
    Int amin = floor_surd(lo * Rat(b)) + 1, amax = floor_surd(hi * Rat(b));
    for (Int a = amin; a <= amax; ++a) {
      if (gcd(a, Int(b)) != 1) continue;
      if (is_square(self_intersection_int(Int(b), a, o))) continue;
      out.push_back(make_rat(a, Int(b)));
    }
  }
  return out;
}

}  // namespace

TEST(PellBounds, ValueAtOwnPoint) {
  for (const auto& o : orders())
    for (const Rat& mu : usable(o, 15)) {
      PellBound pb = pell_bound(mu, o);
      Rat v = pb.at(mu);
      Rat l2(pb.l() * pb.l());
      EXPECT_EQ(v * v, ray_square(mu, o) * (1 - 1 / l2)) << mu;
      EXPECT_GT(v, 0);
    }
}

TEST(PellBounds, SquareSelfIntersectionRejected) {
  OrderSpec o(Ring::Sqrt, 2);
  try {
    pell_bound(Rat(1, 2), o);  // L^2 = 4 * (2 - 1) = 4
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SquareSelfIntersection);
  }
}

TEST(PellBounds, IntervalIsWhereBoundIsSubmaximal) {
  std::mt19937_64 rng(5);
  for (const auto& o : orders()) {
    auto mus = usable(o, 12);
    auto [lo, hi] = nef_interval(o);
    for (const Rat& mu : mus) {
      PellBound pb = pell_bound(mu, o);
      SubmaxInterval J = submax_interval(pb, o);
      EXPECT_TRUE(J.contains(mu));
      // endpoints solve pi(x)^2 = L_x^2
      for (const Surd& x : {J.lo, J.hi}) {
        Surd v = pb.at(x);
        EXPECT_EQ((v * v - ray_square(x, o)).sign(), 0);
      }
      for (int i = 0; i < 30; ++i) {
        long den = std::uniform_int_distribution<long>(1, 400)(rng);
        Int a = std::uniform_int_distribution<long>(floor_surd(lo * Rat(den)).get_si(), floor_surd(hi * Rat(den)).get_si())(rng);
        Rat x = make_rat(a, Int(den));
        Rat f2 = ray_square(x, o);
        if (f2 <= 0) continue;
        Rat v = pb.at(x);
        bool below = v >= 0 && v * v < f2;
        EXPECT_EQ(below, J.contains(x)) << mu << " at " << x;
      }
    }
  }
}

TEST(PellBounds, IntervalLengthBound) {
  for (const auto& o : orders())
    for (const Rat& mu : usable(o, 40)) {
      PellBound pb = pell_bound(mu, o);
      Surd len = submax_interval(pb, o).length();
      // len < sqrt(11) / (q sqrt e)  <=>  len^2 q^2 e < 11
      EXPECT_EQ((len * len * Rat(pb.q * pb.q * o.e_int()) - Rat(11)).sign(), -1) << mu;
      Int Q = qbound_from_length(len, o);
      EXPECT_GE(Q, pb.q);
    }
  EXPECT_THROW(qbound_from_length(Rat(0), orders()[0]), Error);
}

TEST(PellBounds, CandidateSetCoversGoodFractions) {
  OrderSpec o(Ring::Sqrt, 2);
  auto cands = candidate_set(Rat(0), o);
  ASSERT_FALSE(cands.empty());
  for (std::size_t i = 1; i < cands.size(); ++i) EXPECT_LT(cands[i - 1].mu, cands[i].mu);
  bool has_zero = false;
  for (const auto& c : cands) has_zero |= c.mu == 0 && c.usable;
  EXPECT_TRUE(has_zero);
}

TEST(Competitors, DirectSearchMatchesBruteForce) {
  for (const auto& o : orders()) {
    auto lambdas = usable(o, 10);
    auto pool = usable(o, 120);
    for (const Rat& lam : lambdas) {
      PellBound own = pell_bound(lam, o);
      Rat v = own.at(lam);
      CompetitorSearch s(o, lam, v * v);
      s.run();
      ASSERT_TRUE(s.finished());
      std::optional<Rat> brute;
      for (const Rat& mu : pool) {
        if (mu == lam) continue;
        Rat w = pell_bound(mu, o).at(lam);
        if (w >= 0 && (!brute || w < *brute)) brute = w;
      }
      if (s.found().empty()) {
        EXPECT_TRUE(!brute || *brute > v) << lam;
      } else {
        ASSERT_TRUE(brute) << lam;
        EXPECT_EQ(s.found().front().value, *brute) << lam;
        EXPECT_LE(s.found().front().value, v);
      }
    }
  }
}

TEST(Competitors, ClassEnumerationMatchesDirectSearch) {
  for (const auto& o : orders()) {
    for (const Rat& lam : usable(o, 14)) {
      PellBound own = pell_bound(lam, o);
      Rat v = own.at(lam);
      auto by_classes = competitors_by_classes(o, lam, own.pell, v * v, false);
      // every listed bound is genuine and below the threshold
      for (const auto& c : by_classes) {
        EXPECT_NE(c.mu(), lam);
        EXPECT_LE(c.value, v);
        EXPECT_EQ(c.value, make_pell_bound(c.b, c.a, c.pell, o).at(lam));
        EXPECT_EQ(c.pell, pell1(self_intersection_int(c.b, c.a, o)));
      }
      for (std::size_t i = 1; i < by_classes.size(); ++i) EXPECT_LE(by_classes[i - 1].value, by_classes[i].value);
      CompetitorSearch s(o, lam, v * v);
      s.run();
      std::set<Rat> direct, classes;
      for (const auto& c : s.found()) direct.insert(c.mu());
      for (const auto& c : by_classes)
        if (c.value == by_classes.front().value) classes.insert(c.mu());
      EXPECT_EQ(direct, classes) << lam;
      // anything the brute force sees below v must be listed
      std::set<Rat> listed;
      for (const auto& c : by_classes) listed.insert(c.mu());
      for (const Rat& mu : usable(o, 60)) {
        if (mu == lam) continue;
        Rat w = pell_bound(mu, o).at(lam);
        if (w <= v && w >= 0) EXPECT_TRUE(listed.count(mu)) << lam << " misses " << mu;
      }
    }
  }
}

TEST(Covering, BoundCoversItsOwnSubinterval) {
  OrderSpec o(Ring::Half, 33);
  PellBound pb = pell_bound(Rat(1, 3), o);
  SubmaxInterval J = submax_interval(pb, o);
  Surd mid = (J.lo + J.hi) / Rat(2);
  EXPECT_TRUE(bound_covers(pb, J.lo, J.hi, o));
  EXPECT_TRUE(bound_covers(pb, mid, J.hi, o));
  EXPECT_FALSE(bound_covers(pb, J.lo - Rat(1, 1000), J.hi, o));
  auto found = find_covering_bound(mid, J.hi, Int(10), o);
  ASSERT_TRUE(found);
  EXPECT_LE(found->q, 3);
}
