#pragma once

// Pell bounds pi_lambda, their submaximality intervals, the interval-length
// q-bound, the candidate set A_lambda and a pruned competitor search.
//
// Notation used throughout: lambda = p/q, L = (q, p) primitive, D = L^2,
// (l, k) = pell1(D). pi_lambda(t) = k (L . L_t) / l.
//
// For another class M = (b, a) with D_M = M^2 and c = b p - a q one has
//   (M . L_lambda)^2 - D_M L_lambda^2 = |det G| c^2 / q^2
// so pi_M(lambda) <= beta is equivalent to
//   k_M^2 ((L_lambda^2 - beta^2) D_M + |det G| c^2 / q^2) <= beta^2.
// The left bracket bounds k_M from above, which lets pell1_bounded stop
// early, and bounds |c|, which leaves one or two numerators per b.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <vector>

#include "seshadri/exactfield.hpp"
#include "seshadri/lattice.hpp"
#include "seshadri/pell.hpp"

namespace seshadri {

struct PellBound {
  Rat lambda;
  Int q;
  Int p;
  Int D;            // (q L_lambda)^2
  PellSolution pell;  // (l, k) = (x, y)
  Rat c0;
  Rat c1;

  const Int& l() const { return pell.x; }
  const Int& k() const { return pell.y; }
  Rat at(const Rat& t) const { return c0 + c1 * t; }
  Surd at(const Surd& t) const { return t * c1 + c0; }
};

struct SubmaxInterval {
  Surd lo;
  Surd hi;

  bool contains(const Rat& t) const {
    Surd s = Surd::rational(t, lo.e());
    return lo < s && s < hi;
  }
  bool contains(const Surd& s) const { return lo < s && s < hi; }
  Surd length() const { return hi - lo; }
};

inline PellBound make_pell_bound(const Int& q, const Int& p, const PellSolution& sol, const OrderSpec& o) {
  Rat k(sol.y), l(sol.x);
  Rat dot0 = Rat(o.g00() * q + o.g01() * p);  // L . L0
  Rat dot1 = Rat(o.g01() * q + o.g11() * p);  // L . Linf
  return PellBound{make_rat(p, q), q, p, sol.D, sol, k * dot0 / l, k * dot1 / l};
}

inline PellBound pell_bound(const Rat& t, const OrderSpec& o) {
  require_ample_ray(t, o);
  Int q = t.get_den(), p = t.get_num();
  Int D = self_intersection_int(q, p, o);
  if (is_square(D))
    throw Error(ErrorCode::SquareSelfIntersection,
                "L_t^2 is a rational square at t = " + to_string(t) + " (Pell bound undefined)");
  return make_pell_bound(q, p, pell1(D), o);
}

inline SubmaxInterval submax_interval(const PellBound& pb, const OrderSpec& o) {
  std::int64_t e = o.e();
  Rat E(o.e_int());
  Rat k2q2 = Rat(pb.k() * pb.k() * pb.q * pb.q);
  Rat l(pb.l());
  if (o.ring() == Ring::Sqrt) {
    Rat den = E * (2 * k2q2 + 1);
    Rat mid = 2 * E * k2q2 * pb.lambda / den;
    Rat rad = l / den;
    return {Surd(mid, -rad, e), Surd(mid, rad, e)};
  }
  Rat den = (E - 1) + 2 * E * k2q2;
  Rat mid = (2 + 2 * E * k2q2 * pb.lambda) / den;
  Rat rad = 2 * l / den;
  return {Surd(mid, -rad, e), Surd(mid, rad, e)};
}

/// L_x^2 at a surd point.
inline Surd ray_square(const Surd& x, const OrderSpec& o) {
  return x * x * Rat(o.g11()) + x * Rat(2 * o.g01()) + Rat(o.g00());
}

/// Largest q with q * s * sqrt(e) <= sqrt(11), i.e. q^2 s^2 e <= 11.
inline Int qbound_from_length(const Surd& s, const OrderSpec& o) {
  if (s.sign() <= 0) throw Error(ErrorCode::NonpositiveLength, "interval length must be positive");
  Surd x = Surd::rational(Rat(11), s.e()) / (s * s * Rat(o.e_int()));
  return isqrt(floor_surd(x));
}

inline Int qbound_from_length(const Rat& s, const OrderSpec& o) {
  return qbound_from_length(Surd::rational(s, o.e()), o);
}

/// s(lambda) = min(lambda - t1, t2 - lambda).
inline Surd half_width(const PellBound& pb, const SubmaxInterval& J) {
  Surd lam = Surd::rational(pb.lambda, J.lo.e());
  Surd left = lam - J.lo, right = J.hi - lam;
  return left < right ? left : right;
}

struct Candidate {
  Rat mu;
  bool usable;  // false when L_mu^2 is a rational square
};

/// A_lambda: reduced fractions in the open nef interval with denominator up
/// to the q-bound of s(lambda), ascending.
inline std::vector<Candidate> candidate_set(const Rat& t, const OrderSpec& o) {
  PellBound pb = pell_bound(t, o);
  SubmaxInterval J = submax_interval(pb, o);
  Int Q = qbound_from_length(half_width(pb, J), o);
  auto [lo, hi] = nef_interval(o);
  std::vector<Candidate> out;
  for (Int b = 1; b <= Q; ++b) {
    Rat rb(b);
    // endpoints are irrational, so floor/ceil never hit them exactly
    Int amin = floor_surd(lo * rb) + 1, amax = floor_surd(hi * rb);
    for (Int a = amin; a <= amax; ++a) {
      if (gcd(a, b) != 1) continue;
      Int D = self_intersection_int(b, a, o);
      out.push_back({make_rat(a, b), !is_square(D)});
    }
  }
  std::sort(out.begin(), out.end(), [](const Candidate& x, const Candidate& y) { return x.mu < y.mu; });
  return out;
}

// ---------------------------------------------------------------------------
// Competitor search

struct Competitor {
  Int b;
  Int a;
  PellSolution pell;
  Rat value;  // pi_{a/b}(lambda)

  Rat mu() const { return make_rat(a, b); }
};

struct SearchOptions {
  bool strict = false;        // initial threshold is "< beta" instead of "<= beta"
  bool exclude_self = true;   // skip mu == lambda
  bool stop_first = false;    // finish at the first accepted competitor
  std::optional<Int> bmax;    // hard cap on denominators (needed when beta^2 = L_lambda^2)
};

/// Finds every reduced mu = a/b with pi_mu(lambda) <= beta (or < beta), while
/// tightening beta to the best value seen. The result is the exact set of
/// minimizers over all Pell bounds once finished(), or the first hit when
/// stop_first is set. Work is split into resumable steps over b.
class CompetitorSearch {
 public:
  CompetitorSearch(const OrderSpec& o, const Rat& lambda, const Rat& beta_sq, SearchOptions opt = {})
      : o_(o), opt_(std::move(opt)), q_(lambda.get_den()), p_(lambda.get_num()), lambda_(lambda) {
    Dl_ = self_intersection_int(q_, p_, o_);
    F2_ = ray_square(lambda_, o_);
    detG_ = o_.abs_det();
    strict_active_ = opt_.strict;
    set_beta_sq(beta_sq);
    if (Pn_ < 0) throw Error(ErrorCode::BadInput, "competitor search needs beta^2 <= L_lambda^2");
  }

  bool finished() const { return done_; }
  const std::vector<Competitor>& found() const { return found_; }
  const Rat& beta_sq() const { return beta_sq_; }
  const Int& last_b() const { return b_; }
  std::uint64_t b_steps() const { return steps_; }

  /// Process at most `budget` denominators; returns finished().
  bool step(std::uint64_t budget = std::numeric_limits<std::uint64_t>::max()) {
    while (!done_ && budget-- > 0) {
      ++b_;
      ++steps_;
      if (opt_.bmax && b_ > *opt_.bmax) {
        done_ = true;
        break;
      }
      if (past_end()) {
        done_ = true;
        break;
      }
      scan_b();
    }
    return done_;
  }

  void run() { step(); }

  /// Rough cost of finishing by scanning denominators, in small-integer
  /// operations: b runs up to about sqrt(Bn / (L_lambda^2 Pn)).
  double direct_cost() const {
    if (done_) return 0;
    if (Pn_ <= 0) return std::numeric_limits<double>::infinity();
    double b_end = std::sqrt(Rat(Rat(Bn_) / (F2_ * Rat(Pn_))).get_d());
    double per_b = 1.0 + 2.0 * cmax_.get_d() / q_.get_d();
    return std::max(0.0, b_end - b_.get_d()) * per_b * 2000.0;
  }

  /// Rough cost of competitors_by_classes for the current threshold: one
  /// residue scan of size up to D per pair (c, k).
  double class_cost() const {
    double k0 = std::sqrt(Rat(Rat(Bn_) / Rat(Bd_ * detG_)).get_d());
    double c = std::max(1.0, cmax_.get_d());
    return 2.0 * k0 * (std::log(c) + 1.0) * Dl_.get_d();
  }

 private:
  void set_beta_sq(const Rat& beta_sq) {
    beta_sq_ = beta_sq;
    Rat B = Rat(q_ * q_) * beta_sq;
    Bn_ = B.get_num();
    Bd_ = B.get_den();
    Pn_ = Dl_ * Bd_ - Bn_;
    cmax_ = isqrt(Int(Bn_ / (Bd_ * detG_)));
    w_ = make_rat(cmax_, q_);  // |mu - lambda| = |c| / (b q) <= w / b
  }

  bool past_end() const {
    if (Pn_ <= 0) return false;
    Rat wb = w_ / Rat(b_);
    Rat m1 = ray_square(Rat(lambda_ - wb), o_), m2 = ray_square(Rat(lambda_ + wb), o_);
    Rat m = m1 < m2 ? m1 : m2;
    if (m <= 0) return false;
    return Rat(b_ * b_) * m * Rat(Pn_) > Rat(Bn_);
  }

  void scan_b() {
    Int bp = b_ * p_;
    Int lo_num = bp - cmax_, hi_num = bp + cmax_;
    Int amin, amax;
    mpz_cdiv_q(amin.get_mpz_t(), lo_num.get_mpz_t(), q_.get_mpz_t());
    mpz_fdiv_q(amax.get_mpz_t(), hi_num.get_mpz_t(), q_.get_mpz_t());
    for (Int a = amin; a <= amax && !done_; ++a) {
      if (opt_.exclude_self && b_ == q_ && a == p_) continue;
      if (gcd(a, b_) != 1) continue;
      Int Dm = self_intersection_int(b_, a, o_);
      if (Dm <= 0) continue;
      Int c = bp - a * q_;
      if (c == 0) continue;  // mu == lambda
      Int R = Pn_ * Dm + detG_ * c * c * Bd_;
      if (R > Bn_) continue;
      if (is_square(Dm)) continue;
      Int K = isqrt(Int(Bn_ / R));
      auto sol = pell1_bounded(Dm, K);
      if (!sol) continue;
      Int lhs = sol->y * sol->y * R;
      bool tie = lhs == Bn_;
      if (tie && strict_active_) continue;
      Int N = o_.g00() * b_ * q_ + o_.g01() * (b_ * p_ + a * q_) + o_.g11() * a * p_;
      Rat value = make_rat(sol->y * N, q_ * sol->x);
      Competitor comp{b_, a, *sol, value};
      if (!tie) {
        strict_active_ = false;
        found_.clear();
        set_beta_sq(value * value);
      }
      found_.push_back(std::move(comp));
      if (opt_.stop_first) done_ = true;
    }
  }

  OrderSpec o_;
  SearchOptions opt_;
  Int q_, p_;
  Rat lambda_;
  Int Dl_;
  Rat F2_;
  Int detG_;
  Rat beta_sq_;
  Int Bn_, Bd_, Pn_, cmax_;
  Rat w_;
  Int b_ = 0;
  std::uint64_t steps_ = 0;
  bool strict_active_ = false;
  bool done_ = false;
  std::vector<Competitor> found_;
};

/// Every mu != lambda with pi_mu(lambda) <= beta (< beta when strict), sorted
/// by value. Work does not grow with the size of pell1(D_lambda).
///
/// With the notation above, put x = l_M and Y = k_M (D b - c N1), N1 =
/// L . Linf. Then k_M^2 D_M + 1 = x^2 turns into
///   (Y/q)^2 - D x^2 = k_M^2 c^2 |det G| - D,
/// and the pruning inequality leaves finitely many (c, k_M), each with
/// |right side| < D. The solutions come from generalized_pell_classes and
/// their orbits under the unit l + k sqrt(D); x is bounded through D_M.
inline std::vector<Competitor> competitors_by_classes(const OrderSpec& o, const Rat& lambda, const PellSolution& own,
                                                      const Rat& beta_sq, bool strict) {
  Int q = lambda.get_den(), p = lambda.get_num();
  Int D = self_intersection_int(q, p, o);
  if (own.D != D || own.N != 1) throw Error(ErrorCode::BadInput, "Pell solution does not belong to lambda");
  Int G = o.abs_det();
  Int N1 = o.g01() * q + o.g11() * p;
  Rat B = Rat(q * q) * beta_sq;
  Int Bn = B.get_num(), Bd = B.get_den();
  Int Pn = D * Bd - Bn;
  if (Pn <= 0) throw Error(ErrorCode::BadInput, "competitor search needs beta^2 < L_lambda^2");
  const Int &ul = own.x, &uk = own.y;
  std::vector<Competitor> out;
  std::set<std::pair<Int, Int>> seen;  // (b, a)
  Int cmax = isqrt(Int(Bn / (Bd * G)));
  for (Int c = 1; c <= cmax; ++c) {
    for (Int kk = 1; kk * kk * c * c * G * Bd <= Bn; ++kk) {
      // D_M <= (Bn - kk^2 G c^2 Bd) / (kk^2 Pn), so x^2 = kk^2 D_M + 1 is bounded
      Int dm_max = (Bn - kk * kk * G * c * c * Bd) / (kk * kk * Pn);
      Int x_max = isqrt(Int(kk * kk * dm_max + 1));
      Int n0 = kk * kk * c * c * G - D;
      if (n0 == 0) continue;
      for (int sc : {1, -1}) {
        Int cs = sc * c;
        for (const auto& [u0, x0] : generalized_pell_classes(D, n0)) {
          for (int su : {1, -1})
            for (int sx : {1, -1}) {
              // walk the orbit both ways; |x| is convex along it
              for (int dir : {1, -1}) {
                Int U = su * u0, X = sx * x0;
                Int prev_abs = -1;
                for (int guard = 0; guard < 4096; ++guard) {
                  Int ax = X < 0 ? Int(-X) : X;
                  if (X >= 1 && X <= x_max) {
                    Int Y = q * U;
                    if (Y % kk == 0) {
                      Int T = Y / kk + cs * N1;
                      if (T % D == 0 && T / D >= 1) {
                        Int b = T / D;
                        Int num = b * p - cs;
                        if (num % q == 0) {
                          Int a = num / q;
                          Int Dm = self_intersection_int(b, a, o);
                          if (gcd(a, b) == 1 && Dm > 0 && seen.emplace(b, a).second) {
                            Int R = Pn * Dm + G * cs * cs * Bd;
                            auto sol = pell1_bounded(Dm, isqrt(Int(Bn / R)));
                            if (sol) {
                              Int lhs = sol->y * sol->y * R;
                              if (!(strict && lhs == Bn)) {
                                Int Nm = o.g00() * b * q + o.g01() * (b * p + a * q) + o.g11() * a * p;
                                out.push_back(Competitor{b, a, *sol, make_rat(sol->y * Nm, q * sol->x)});
                              }
                            }
                          }
                        }
                      }
                    }
                  }
                  if (ax > x_max && prev_abs >= 0 && ax >= prev_abs) break;
                  prev_abs = ax;
                  Int nU = dir > 0 ? Int(U * ul + X * uk * D) : Int(U * ul - X * uk * D);
                  Int nX = dir > 0 ? Int(X * ul + U * uk) : Int(X * ul - U * uk);
                  U = std::move(nU);
                  X = std::move(nX);
                }
              }
            }
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Competitor& x, const Competitor& y) {
    if (x.value != y.value) return x.value < y.value;
    return x.mu() < y.mu();
  });
  return out;
}

// ---------------------------------------------------------------------------
// Covering: does J_tau contain the closed interval [x_lo, x_hi]?
//
// pi_tau(x)^2 <= L_x^2  <=>  k^2 |det G| (b x - a)^2 <= L_x^2 for tau = a/b.

inline bool bound_covers(const PellBound& pb, const Surd& x_lo, const Surd& x_hi, const OrderSpec& o) {
  for (const Surd* x : {&x_lo, &x_hi}) {
    Surd d = *x * Rat(pb.q) - Rat(pb.p);
    Surd lhs = d * d * Rat(pb.k() * pb.k() * o.abs_det());
    if ((ray_square(*x, o) - lhs).sign() < 0) return false;
  }
  return true;
}

/// Resumable search for a Pell bound with denominator <= qmax whose
/// submaximality interval contains [x_lo, x_hi]; ascending denominator, then
/// numerator.
class CoveringSearch {
 public:
  CoveringSearch(const Surd& x_lo, const Surd& x_hi, const Int& qmax, const OrderSpec& o)
      : o_(o), x_lo_(x_lo), x_hi_(x_hi), qmax_(qmax), f_lo_(ray_square(x_lo, o)), f_hi_(ray_square(x_hi, o)) {
    if (f_lo_.sign() <= 0 || f_hi_.sign() <= 0) done_ = true;
  }

  bool finished() const { return done_; }
  const std::optional<PellBound>& found() const { return found_; }

  bool step(std::uint64_t budget = std::numeric_limits<std::uint64_t>::max()) {
    while (!done_ && budget-- > 0) {
      ++b_;
      if (b_ > qmax_) {
        done_ = true;
        break;
      }
      scan_b();
    }
    return done_;
  }

 private:
  void scan_b() {
    Rat rb(b_), G(o_.abs_det());
    Surd one = Surd::rational(Rat(1), o_.e());
    // |b x - a| < 1 at both endpoints
    Int amin = floor_surd(x_lo_ * rb) - 1, amax = floor_surd(x_hi_ * rb) + 2;
    for (Int a = amin; a <= amax; ++a) {
      if (gcd(a, b_) != 1) continue;
      Int D = self_intersection_int(b_, a, o_);
      if (D <= 0 || is_square(D)) continue;
      Surd d_lo = x_lo_ * rb - Rat(a), d_hi = x_hi_ * rb - Rat(a);
      Surd r_lo = f_lo_ / (d_lo * d_lo * G), r_hi = f_hi_ / (d_hi * d_hi * G);
      Surd r = r_lo < r_hi ? r_lo : r_hi;
      if (r < one) continue;
      Int K = isqrt(floor_surd(r));
      auto sol = pell1_bounded(D, K);
      if (!sol) continue;
      PellBound pb = make_pell_bound(b_, a, *sol, o_);
      if (bound_covers(pb, x_lo_, x_hi_, o_)) {
        found_ = std::move(pb);
        done_ = true;
        return;
      }
    }
  }

  OrderSpec o_;
  Surd x_lo_, x_hi_;
  Int qmax_;
  Surd f_lo_, f_hi_;
  Int b_ = 0;
  bool done_ = false;
  std::optional<PellBound> found_;
};

inline std::optional<PellBound> find_covering_bound(const Surd& x_lo, const Surd& x_hi, const Int& qmax,
                                                    const OrderSpec& o) {
  CoveringSearch s(x_lo, x_hi, qmax, o);
  s.step();
  return s.found();
}

}  // namespace seshadri
