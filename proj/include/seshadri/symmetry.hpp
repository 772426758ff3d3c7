#pragma once

// Isometries of NS(X) that preserve the ample cone, principal polarizations
// and reduction of a ray point into the fundamental interval.
//
// A matrix acts on coordinate columns (a, b) of a L0 + b Linf; on ray points
// this is t -> (m10 + m11 t) / (m00 + m01 t).

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "seshadri/lattice.hpp"
#include "seshadri/pell.hpp"
#include "seshadri/seshadri.hpp"

namespace seshadri {

struct IsometryMatrix {
  Int m00, m01, m10, m11;

  friend bool operator==(const IsometryMatrix&, const IsometryMatrix&) = default;

  IsometryMatrix operator*(const IsometryMatrix& o) const {
    return {m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11, m10 * o.m00 + m11 * o.m10,
            m10 * o.m01 + m11 * o.m11};
  }
  Int det() const { return m00 * m11 - m01 * m10; }
};

inline IsometryMatrix identity_matrix() { return {1, 0, 0, 1}; }

inline BundleClass apply_isometry(const IsometryMatrix& M, const BundleClass& L) {
  return {Rat(M.m00) * L.a + Rat(M.m01) * L.b, Rat(M.m10) * L.a + Rat(M.m11) * L.b};
}

inline Rat apply_to_ray(const IsometryMatrix& M, const Rat& t) {
  Rat den = Rat(M.m00) + Rat(M.m01) * t;
  if (den == 0) throw Error(ErrorCode::DivisionByZero, "isometry sends the ray to infinity");
  return (Rat(M.m10) + Rat(M.m11) * t) / den;
}

/// M^T G M == G and M maps L0 to a class with positive L0 coefficient.
inline bool preserves_form(const IsometryMatrix& M, const OrderSpec& o) {
  BundleClass c0{Rat(M.m00), Rat(M.m10)}, c1{Rat(M.m01), Rat(M.m11)};
  BundleClass L0{1, 0}, Linf{0, 1};
  return intersection(c0, c0, o) == intersection(L0, L0, o) && intersection(c0, c1, o) == intersection(L0, Linf, o) &&
         intersection(c1, c1, o) == intersection(Linf, Linf, o) && M.m00 > 0;
}

struct Generators {
  IsometryMatrix gen;
  IsometryMatrix gen_inv;
  IsometryMatrix invol;
  Int alpha0;
  Int beta0;
};

inline Generators generators(const OrderSpec& o) {
  Int e = o.e_int();
  if (o.ring() == Ring::Sqrt) {
    PellSolution s = pell1(e);
    const Int &a = s.x, &b = s.y;
    return {{a, e * b, b, a}, {a, -e * b, -b, a}, {1, 0, 0, -1}, a, b};
  }
  PellSolution s = pell4(e);
  if (!(s.x > s.y)) throw Error(ErrorCode::BadInput, "expected x0 > y0 in the minimal solution of x^2 - e y^2 = 4");
  Int a = (s.x - s.y) / 2, b = s.y;
  Int c = (e - 1) / 4 * b;
  return {{a, c, b, a + b}, {a + b, -c, -b, a}, {1, 1, 0, -1}, a, b};
}

struct FundamentalInterval {
  Rat lo;
  Rat hi;
};

inline FundamentalInterval fundamental_interval(const OrderSpec& o) {
  Generators g = generators(o);
  if (o.ring() == Ring::Sqrt) return {0, make_rat(g.alpha0 - 1, o.e_int() * g.beta0)};
  return {0, make_rat(g.beta0, g.alpha0 + 1)};
}

/// L_k = gen^k L0 for k in [kmin, kmax].
inline std::vector<BundleClass> principal_polarizations(const OrderSpec& o, long kmin, long kmax) {
  if (kmin > kmax) throw Error(ErrorCode::InvalidRange, "kmin must not exceed kmax");
  Generators g = generators(o);
  BundleClass L{1, 0};
  const IsometryMatrix& down = g.gen_inv;
  for (long k = 0; k > kmin; --k) L = apply_isometry(down, L);
  for (long k = 0; k < kmin; ++k) L = apply_isometry(g.gen, L);
  std::vector<BundleClass> out;
  for (long k = kmin; k <= kmax; ++k) {
    out.push_back(L);
    L = apply_isometry(g.gen, L);
  }
  return out;
}

enum class GroupLetter { Gen, GenInv, Invol };

inline const char* letter_name(GroupLetter l) {
  switch (l) {
    case GroupLetter::Gen: return "gen";
    case GroupLetter::GenInv: return "gen^-1";
    case GroupLetter::Invol: return "invol";
  }
  return "?";
}

inline const IsometryMatrix& letter_matrix(const Generators& g, GroupLetter l) {
  switch (l) {
    case GroupLetter::Gen: return g.gen;
    case GroupLetter::GenInv: return g.gen_inv;
    case GroupLetter::Invol: return g.invol;
  }
  return g.invol;
}

/// Composite w1 w2 ... wn (wn applied first).
inline IsometryMatrix word_matrix(const Generators& g, const std::vector<GroupLetter>& word) {
  IsometryMatrix M = identity_matrix();
  for (GroupLetter l : word) M = M * letter_matrix(g, l);
  return M;
}

struct Reduction {
  Rat t;                          // point in the fundamental interval
  std::vector<GroupLetter> word;  // word(L_t') lies on the ray of L_t
};

inline Reduction reduce_to_fundamental(const Rat& t, const OrderSpec& o) {
  require_ample_ray(t, o);
  Generators g = generators(o);
  FundamentalInterval F = fundamental_interval(o);
  Rat t1 = make_rat(g.beta0, g.alpha0);  // ray of L_1
  Reduction r{t, {}};
  // each applied step s is recorded as s^-1 at the end of the word
  if (r.t < 0) {
    r.t = apply_to_ray(g.invol, r.t);
    r.word.push_back(GroupLetter::Invol);
  }
  while (r.t >= t1) {
    r.t = apply_to_ray(g.gen_inv, r.t);
    r.word.push_back(GroupLetter::Gen);
  }
  while (r.t < 0) {  // cannot happen after the reflection, kept as a guard
    r.t = apply_to_ray(g.gen, r.t);
    r.word.push_back(GroupLetter::GenInv);
  }
  if (r.t > F.hi) {
    // gen o invol is an involution swapping [0, hi] and [hi, t1]
    r.t = apply_to_ray(g.gen * g.invol, r.t);
    r.word.push_back(GroupLetter::Gen);
    r.word.push_back(GroupLetter::Invol);
  }
  return r;
}

/// Image of a certified curve under an isometry. D and hence (l, k) are
/// invariant; the class (q, p) stays primitive.
inline CurveCertificate transport_certificate(const CurveCertificate& c, const IsometryMatrix& M, const OrderSpec& o) {
  Int q = M.m00 * c.bound.q + M.m01 * c.bound.p;
  Int p = M.m10 * c.bound.q + M.m11 * c.bound.p;
  if (q <= 0) throw Error(ErrorCode::NotAmple, "isometry leaves the ample cone");
  return make_certificate(make_pell_bound(q, p, c.pell, o), o);
}

/// Group elements gen^n and gen^n invol whose image of the fundamental
/// interval meets [lo, hi], with their words.
inline std::vector<std::pair<IsometryMatrix, std::vector<GroupLetter>>> tiles_meeting(const Rat& lo, const Rat& hi,
                                                                                    const OrderSpec& o) {
  Generators g = generators(o);
  FundamentalInterval F = fundamental_interval(o);
  std::vector<std::pair<IsometryMatrix, std::vector<GroupLetter>>> out;
  auto consider = [&](const IsometryMatrix& M, const std::vector<GroupLetter>& w) {
    Rat a = apply_to_ray(M, F.lo), b = apply_to_ray(M, F.hi);
    if (b < a) std::swap(a, b);
    if (a <= hi && lo <= b) out.emplace_back(M, w);
    return std::pair(a, b);
  };
  // upwards: gen^n and gen^n invol for n >= 0
  IsometryMatrix P = identity_matrix();
  std::vector<GroupLetter> w;
  for (;;) {
    auto a1 = consider(P, w).first;
    auto w2 = w;
    w2.push_back(GroupLetter::Invol);
    auto a2 = consider(P * g.invol, w2).first;
    if (a1 > hi && a2 > hi) break;
    P = P * g.gen;
    w.push_back(GroupLetter::Gen);
  }
  // downwards: gen^-n and gen^-n invol for n >= 1
  P = g.gen_inv;
  w = {GroupLetter::GenInv};
  for (;;) {
    auto b1 = consider(P, w).second;
    auto w2 = w;
    w2.push_back(GroupLetter::Invol);
    auto b2 = consider(P * g.invol, w2).second;
    if (b1 < lo && b2 < lo) break;
    P = P * g.gen_inv;
    w.push_back(GroupLetter::GenInv);
  }
  return out;
}

/// Segments over [lo, hi] built from the certified curves of the fundamental
/// interval and their images under the group.
inline std::vector<Segment> sample_function_by_group(const Rat& lo, const Rat& hi, const Int& qmax, const OrderSpec& o,
                                                     unsigned threads = 1) {
  if (!(lo < hi) || qmax < 1 || !is_ample_ray(lo, o) || !is_ample_ray(hi, o))
    throw Error(ErrorCode::InvalidRange, "range must satisfy lo < hi inside the open nef interval, qmax >= 1");
  FundamentalInterval F = fundamental_interval(o);
  auto base = certified_curves(F.lo, F.hi, qmax, o, threads);
  std::vector<CurveCertificate> all;
  Surd slo = Surd::rational(lo, o.e()), shi = Surd::rational(hi, o.e());
  for (const auto& [M, word] : tiles_meeting(lo, hi, o)) {
    for (const auto& c : base) {
      CurveCertificate img = transport_certificate(c, M, o);
      if (img.interval.lo < shi && slo < img.interval.hi) all.push_back(std::move(img));
    }
  }
  std::sort(all.begin(), all.end(), [](const CurveCertificate& x, const CurveCertificate& y) { return x.lambda < y.lambda; });
  all.erase(std::unique(all.begin(), all.end(),
                        [](const CurveCertificate& x, const CurveCertificate& y) { return x.lambda == y.lambda; }),
            all.end());
  return with_gaps(envelope_segments(all, o), slo, shi);
}

}  // namespace seshadri
