#include <gtest/gtest.h>

#include "seshadri/symmetry.hpp"

using namespace seshadri;

namespace {

const std::vector<OrderSpec>& orders() {
  static const std::vector<OrderSpec> os{OrderSpec(Ring::Sqrt, 2), OrderSpec(Ring::Sqrt, 7), OrderSpec(Ring::Half, 5),
                                         OrderSpec(Ring::Half, 33), OrderSpec(Ring::Half, 17)};
  return os;
}

}  // namespace

TEST(Group, GeneratorsAreIsometries) {
  for (const auto& o : orders()) {
    Generators g = generators(o);
    EXPECT_TRUE(preserves_form(g.gen, o));
    EXPECT_TRUE(preserves_form(g.gen_inv, o));
    EXPECT_TRUE(preserves_form(g.invol, o));
    EXPECT_EQ(g.gen * g.gen_inv, identity_matrix());
    EXPECT_EQ(g.invol * g.invol, identity_matrix());
    EXPECT_EQ(abs_int(g.gen.det()), 1);
    // gen o invol is an involution too
    IsometryMatrix s = g.gen * g.invol;
    EXPECT_EQ(s * s, identity_matrix());
    EXPECT_FALSE(preserves_form(IsometryMatrix{2, 0, 0, 1}, o));
  }
}

TEST(Group, KnownGenerators) {
  Generators s2 = generators(OrderSpec(Ring::Sqrt, 2));
  EXPECT_EQ(s2.gen, (IsometryMatrix{3, 4, 2, 3}));
  Generators h5 = generators(OrderSpec(Ring::Half, 5));
  EXPECT_EQ(h5.gen, (IsometryMatrix{1, 1, 1, 2}));
  FundamentalInterval F = fundamental_interval(OrderSpec(Ring::Half, 5));
  EXPECT_EQ(F.lo, 0);
  EXPECT_EQ(F.hi, Rat(1, 2));
}

TEST(Group, PrincipalPolarizations) {
  for (const auto& o : orders()) {
    auto Ls = principal_polarizations(o, -3, 3);
    ASSERT_EQ(Ls.size(), 7u);
    EXPECT_EQ(Ls[3], (BundleClass{1, 0}));
    for (const auto& L : Ls) {
      EXPECT_EQ(self_intersection(L, o), 2);
      EXPECT_TRUE(is_ample(L, o));
    }
    // increasing rays
    for (std::size_t i = 1; i < Ls.size(); ++i) EXPECT_LT(Ls[i - 1].b / Ls[i - 1].a, Ls[i].b / Ls[i].a);
  }
  EXPECT_THROW(principal_polarizations(orders()[0], 2, 1), Error);
}

TEST(Group, ReductionLandsInFundamentalInterval) {
  for (const auto& o : orders()) {
    auto [lo, hi] = nef_interval(o);
    FundamentalInterval F = fundamental_interval(o);
    Generators g = generators(o);
    for (long q = 1; q <= 25; ++q) {
      Int amin = floor_surd(lo * Rat(q)) + 1, amax = floor_surd(hi * Rat(q));
      for (Int p = amin; p <= amax; ++p) {
        Rat t = make_rat(p, Int(q));
        Reduction r = reduce_to_fundamental(t, o);
        EXPECT_GE(r.t, F.lo);
        EXPECT_LE(r.t, F.hi);
        EXPECT_EQ(apply_to_ray(word_matrix(g, r.word), r.t), t) << t;
        EXPECT_EQ(ray_square(r.t, o) * Rat(r.t.get_den() * r.t.get_den()), ray_square(t, o) * Rat(q * q) / Rat(gcd(p, Int(q)) * gcd(p, Int(q))))
            << "D is a group invariant";
      }
    }
  }
}

TEST(Group, TransportKeepsPellData) {
  OrderSpec o(Ring::Half, 33);
  Generators g = generators(o);
  auto c = certify_curve(Rat(1, 3), o);
  ASSERT_TRUE(c);
  CurveCertificate img = transport_certificate(*c, g.gen, o);
  EXPECT_EQ(img.pell, c->pell);
  EXPECT_EQ(img.lambda, apply_to_ray(g.gen, c->lambda));
  EXPECT_TRUE(certify_curve(img.lambda, o));
}

TEST(Group, ExtendedSegmentsMatchDirect) {
  OrderSpec o(Ring::Half, 5);
  auto direct = sample_function(Rat(1, 2), Rat(3, 2), Int(40), o);
  auto by_group = sample_function_by_group(Rat(1, 2), Rat(3, 2), Int(40), o);
  // every directly certified segment reappears
  for (const auto& s : direct) {
    if (!s.bound) continue;
    bool seen = false;
    for (const auto& t : by_group) seen |= t.bound && t.bound->lambda == s.bound->lambda;
    EXPECT_TRUE(seen) << s.bound->lambda;
  }
}
