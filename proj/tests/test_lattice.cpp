#include <gtest/gtest.h>

#include "seshadri/lattice.hpp"

using namespace seshadri;

TEST(Orders, Validation) {
  EXPECT_NO_THROW(OrderSpec(Ring::Sqrt, 2));
  EXPECT_NO_THROW(OrderSpec(Ring::Half, 33));
  try {
    OrderSpec(Ring::Sqrt, 9);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SquareE);
  }
  EXPECT_THROW(OrderSpec(Ring::Half, 7), Error);  // not 1 mod 4
  EXPECT_THROW(OrderSpec(Ring::Sqrt, -3), Error);
  EXPECT_EQ(parse_ring("half"), Ring::Half);
  EXPECT_THROW(parse_ring("full"), Error);
}

TEST(Orders, GramMatrix) {
  OrderSpec s(Ring::Sqrt, 7), h(Ring::Half, 13);
  EXPECT_EQ(s.abs_det(), 28);
  EXPECT_EQ(h.abs_det(), 13);
  EXPECT_EQ(abs_int(s.g00() * s.g11() - s.g01() * s.g01()), s.abs_det());
  EXPECT_EQ(abs_int(h.g00() * h.g11() - h.g01() * h.g01()), h.abs_det());
  BundleClass L0{1, 0}, Linf{0, 1};
  EXPECT_EQ(self_intersection(L0, h), 2);
  EXPECT_EQ(intersection(L0, Linf, h), 1);
  EXPECT_EQ(self_intersection(Linf, h), -6);
  EXPECT_EQ(self_intersection(Linf, s), -14);
}

TEST(Orders, IntegerFormMatchesRational) {
  for (Ring r : {Ring::Sqrt, Ring::Half}) {
    OrderSpec o(r, r == Ring::Sqrt ? 3 : 5);
    for (long q = 1; q <= 12; ++q)
      for (long p = -12; p <= 12; ++p) {
        Rat t = make_rat(p, q);
        Int D = self_intersection_int(t.get_den(), t.get_num(), o);
        EXPECT_EQ(Rat(D), ray_square(t, o) * Rat(t.get_den() * t.get_den()));
        EXPECT_EQ(ray_square(t, o), self_intersection(BundleClass{1, t}, o));
      }
  }
}

TEST(Cones, AmpleMatchesSquare) {
  for (Ring r : {Ring::Sqrt, Ring::Half}) {
    OrderSpec o(r, r == Ring::Sqrt ? 2 : 33);
    auto [lo, hi] = nef_interval(o);
    for (const Surd& x : {lo, hi}) EXPECT_EQ((x * x * Rat(o.g11()) + x * Rat(2 * o.g01()) + Rat(o.g00())).sign(), 0);
    for (long a = -6; a <= 6; ++a)
      for (long b = -6; b <= 6; ++b) {
        BundleClass L{Rat(a), Rat(b)};
        bool ample = a > 0 && self_intersection(L, o) > 0;
        EXPECT_EQ(is_ample(L, o), ample) << a << "," << b;
        if (a > 0) {
          Surd t = Surd::rational(make_rat(b, a), o.e());
          EXPECT_EQ(is_ample(L, o), lo < t && t < hi);
        }
      }
  }
}

TEST(Cones, NefEndpoints) {
  auto [lo, hi] = nef_interval(OrderSpec(Ring::Sqrt, 2));
  EXPECT_EQ(hi, Surd(0, Rat(1, 2), 2));  // 1/sqrt 2
  EXPECT_EQ(lo, -hi);
  auto [l5, h5] = nef_interval(OrderSpec(Ring::Half, 5));
  EXPECT_EQ(h5, Surd(Rat(1, 2), Rat(1, 2), 5));
  EXPECT_EQ(l5, Surd(Rat(1, 2), Rat(-1, 2), 5));
}

TEST(Rays, NormalizeAndPrimitive) {
  Normalized n = normalize(BundleClass{6, -4});
  EXPECT_EQ(n.scale, 6);
  EXPECT_EQ(n.t, Rat(-2, 3));
  try {
    normalize(BundleClass{0, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotNormalizable);
  }
  PrimitiveRay r = primitive_and_denominator(Rat(-2, 3));
  EXPECT_EQ(r.q, 3);
  EXPECT_EQ(r.p, -2);
  EXPECT_EQ(r.L, (BundleClass{3, -2}));
  try {
    require_ample_ray(1, OrderSpec(Ring::Sqrt, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotAmple);
  }
}
