#pragma once

// Seshadri constants of L_t and the segment structure of t -> eps(L_t).

#include <algorithm>
#include <optional>
#include <variant>
#include <vector>

#include "seshadri/bounds.hpp"
#include "seshadri/parallel.hpp"

namespace seshadri {

enum class ResultKind { Submaximal, MaxBound };

inline const char* kind_name(ResultKind k) { return k == ResultKind::Submaximal ? "Submaximal" : "MaxBound"; }

struct SeshadriResult {
  ResultKind kind = ResultKind::MaxBound;
  std::variant<Rat, SqrtRat> value;
  std::vector<PellBound> witnesses;  // minimizers, ascending lambda; empty for MaxBound

  bool is_rational() const { return std::holds_alternative<Rat>(value); }
  const Rat& rational() const { return std::get<Rat>(value); }
  /// value^2, always rational.
  Rat square() const {
    if (is_rational()) return rational() * rational();
    return std::get<SqrtRat>(value).radicand();
  }
  long double approx() const {
    return is_rational() ? to_long_double(rational()) : std::get<SqrtRat>(value).approx();
  }
  /// The same constant for the class scale * L.
  SeshadriResult scaled(const Rat& scale) const {
    SeshadriResult r = *this;
    if (is_rational())
      r.value = rational() * scale;
    else
      r.value = SqrtRat(std::get<SqrtRat>(value).radicand() * scale * scale);
    return r;
  }
};

/// Exact equality of two values of the form sqrt(r), r rational.
inline bool same_value(const SeshadriResult& x, const SeshadriResult& y) { return x.square() == y.square(); }

/// sqrt(a) + sqrt(b) <= sqrt(c), exact.
inline bool sqrt_sum_le(const Rat& a, const Rat& b, const Rat& c) {
  Rat d = c - a - b;
  if (d < 0) return false;
  return 4 * a * b <= d * d;
}

inline std::string value_string(const SeshadriResult& r) {
  if (r.is_rational()) return to_string(r.rational());
  return "sqrt(" + to_string(std::get<SqrtRat>(r.value).radicand()) + ")";
}

namespace detail {

inline std::vector<PellBound> bounds_from(const std::vector<Competitor>& found, const OrderSpec& o) {
  std::vector<PellBound> out;
  for (const auto& c : found) out.push_back(make_pell_bound(c.b, c.a, c.pell, o));
  std::sort(out.begin(), out.end(), [](const PellBound& x, const PellBound& y) { return x.lambda < y.lambda; });
  return out;
}

}  // namespace detail

// Denominators scanned directly before the search may switch to the class
// enumeration, whose cost does not depend on the size of pell1(D). The switch
// happens only when the estimate says it is cheaper.
inline constexpr std::uint64_t kDirectSearchSteps = 2048;

/// min over all Pell bounds of pi_mu(t); needs sqrt(L_t^2) irrational.
///
/// The search runs over every reduced mu, not only over A_t: denominators are
/// cut off once no competitor can reach the current best value, or the class
/// enumeration takes over. Every Pell bound is an upper bound for eps, so the
/// minimum is the same.
inline SeshadriResult epsilon_irrational(const Rat& t, const OrderSpec& o) {
  PellBound own = pell_bound(t, o);
  Rat v = own.at(t);
  CompetitorSearch search(o, t, v * v, SearchOptions{false, true, false, std::nullopt});
  search.step(kDirectSearchSteps);
  if (!search.finished() && search.direct_cost() <= search.class_cost()) search.run();
  std::vector<Competitor> found = search.found();
  if (!search.finished()) {
    // all bounds <= v, then keep the minimizers
    found = competitors_by_classes(o, t, own.pell, v * v, false);
    if (!found.empty()) std::erase_if(found, [&](const Competitor& c) { return c.value != found.front().value; });
  }
  SeshadriResult r;
  r.kind = ResultKind::Submaximal;
  if (found.empty()) {
    r.value = v;
    r.witnesses = {own};
    return r;
  }
  Rat best = found.front().value;
  r.value = best;
  r.witnesses = detail::bounds_from(found, o);
  if (best == v) {
    r.witnesses.push_back(own);
    std::sort(r.witnesses.begin(), r.witnesses.end(),
              [](const PellBound& x, const PellBound& y) { return x.lambda < y.lambda; });
  }
  return r;
}

struct CurveClassOption {
  Int q_coeff;  // class = q_coeff * L0 + p_coeff * Linf
  Int p_coeff;
  Int multiplicity;
};

struct CurveCertificate {
  Rat lambda;
  PellSolution pell;
  PellBound bound;
  SubmaxInterval interval;
  // class k(q,p) with multiplicity l, or 2k(q,p) with multiplicity 2l
  std::vector<CurveClassOption> class_options;
};

inline CurveCertificate make_certificate(const PellBound& pb, const OrderSpec& o) {
  const Int& k = pb.k();
  const Int& l = pb.l();
  return CurveCertificate{pb.lambda, pb.pell, pb, submax_interval(pb, o),
                          {{k * pb.q, k * pb.p, l}, {2 * k * pb.q, 2 * k * pb.p, 2 * l}}};
}

/// Resumable certification: finishes with `certified()` true iff pi_t is
/// strictly below every other Pell bound at t.
class Certifier {
 public:
  Certifier(const PellBound& pb, const OrderSpec& o)
      : pb_(pb), o_(o), search_(o, pb.lambda, pb.at(pb.lambda) * pb.at(pb.lambda), SearchOptions{false, true, true, std::nullopt}) {}

  bool step(std::uint64_t budget) {
    if (decided_) return true;
    if (!direct_) {
      std::uint64_t n = std::min(budget, kDirectSearchSteps - std::min(kDirectSearchSteps, search_.b_steps()));
      search_.step(n);
      budget -= n;
      if (!search_.finished() && search_.b_steps() >= kDirectSearchSteps) {
        direct_ = search_.direct_cost() <= search_.class_cost();
        if (!direct_) {
          Rat v = pb_.at(pb_.lambda);
          beaten_ = !competitors_by_classes(o_, pb_.lambda, pb_.pell, v * v, false).empty();
          decided_ = true;
          return true;
        }
      }
    }
    if (direct_ && budget > 0) search_.step(budget);
    if (search_.finished()) {
      decided_ = true;
      beaten_ = !search_.found().empty();
    }
    return decided_;
  }
  bool finished() const { return decided_; }
  bool certified() const { return decided_ && !beaten_; }
  bool beaten() const { return decided_ ? beaten_ : !search_.found().empty(); }
  const PellBound& bound() const { return pb_; }
  std::uint64_t work() const { return search_.b_steps(); }

 private:
  PellBound pb_;
  OrderSpec o_;
  CompetitorSearch search_;
  bool decided_ = false;
  bool beaten_ = false;
  bool direct_ = false;  // keep scanning denominators to the end
};

inline std::optional<CurveCertificate> certify_bound(const PellBound& pb, const OrderSpec& o) {
  Certifier c(pb, o);
  c.step(std::numeric_limits<std::uint64_t>::max());
  if (!c.certified()) return std::nullopt;
  return make_certificate(pb, o);
}

inline std::optional<CurveCertificate> certify_curve(const Rat& t, const OrderSpec& o) {
  return certify_bound(pell_bound(t, o), o);
}

namespace detail {

// Largest x in [inside, outside) (up to bisection resolution) at which
// line(x) < sqrt(L_x^2), given that this holds at `inside`.
template <class Line>
Rat last_submaximal_point(const Rat& inside, const Rat& outside, Line line, const OrderSpec& o, int rounds = 48) {
  Rat in = inside, out = outside;
  for (int i = 0; i < rounds; ++i) {
    Rat mid = (in + out) / 2;
    Rat f2 = ray_square(mid, o);
    bool ok = f2 > 0 && cmp_rat_sqrt(line(mid), SqrtRat(f2)) == std::strong_ordering::less;
    if (ok)
      in = mid;
    else
      out = mid;
  }
  return in;
}

// A rational point outside the open nef interval on the given side.
inline Rat outside_nef(const OrderSpec& o, bool right) {
  auto [lo, hi] = nef_interval(o);
  return right ? Rat(floor_surd(hi) + 1) : Rat(floor_surd(lo));
}

}  // namespace detail

struct RationalBranchInfo {
  Rat mu1, mu2;      // flanking points
  Rat m1, m2;        // slope bounds, m2 <= slope <= m1
  Rat cap;           // value of both lines at t
  Rat inner_lo, inner_hi;  // rational inner bounds of I
  Int qbound;
};

/// The interval construction for t with rational sqrt(L_t^2).
inline RationalBranchInfo rational_branch_info(const Rat& t, const OrderSpec& o) {
  Int q = t.get_den(), p = t.get_num();
  Int D = self_intersection_int(q, p, o);
  Int rootD = isqrt(D);
  RationalBranchInfo info;
  info.cap = make_rat(2 * D - 1, 2 * q * rootD);
  for (Int N = 1;; ++N) {
    // simplest points in (t - 1/(N q^2), t) and (t, t + 1/(N q^2)) keep the
    // flanking denominators near q
    Rat step = make_rat(1, N * q * q);
    Rat a = simplest_between(t - step, t), b = simplest_between(t, t + step);
    if (!is_ample_ray(a, o) || !is_ample_ray(b, o)) continue;
    if (is_square(self_intersection_int(a.get_den(), a.get_num(), o))) continue;
    if (is_square(self_intersection_int(b.get_den(), b.get_num(), o))) continue;
    info.mu1 = a;
    info.mu2 = b;
    break;
  }
  // any minimizer's line is a supergradient of the concave function eps
  SeshadriResult e1 = epsilon_irrational(info.mu1, o), e2 = epsilon_irrational(info.mu2, o);
  info.m1 = e1.witnesses.front().c1;
  for (const auto& w : e1.witnesses) info.m1 = std::min(info.m1, w.c1);
  info.m2 = e2.witnesses.front().c1;
  for (const auto& w : e2.witnesses) info.m2 = std::max(info.m2, w.c1);
  auto r1 = [&](const Rat& x) -> Rat { return info.cap + info.m1 * (x - t); };
  auto r2 = [&](const Rat& x) -> Rat { return info.cap + info.m2 * (x - t); };
  info.inner_hi = detail::last_submaximal_point(t, detail::outside_nef(o, true), r1, o);
  info.inner_lo = detail::last_submaximal_point(t, detail::outside_nef(o, false), r2, o);
  info.qbound = qbound_from_length(Rat(info.inner_hi - info.inner_lo), o);
  return info;
}

/// eps(L_t) for any ample L_t.
inline SeshadriResult epsilon(const Rat& t, const OrderSpec& o) {
  require_ample_ray(t, o);
  Int q = t.get_den(), p = t.get_num();
  Int D = self_intersection_int(q, p, o);
  if (!is_square(D)) return epsilon_irrational(t, o);

  RationalBranchInfo info = rational_branch_info(t, o);
  Rat F2 = ray_square(t, o);
  CompetitorSearch search(o, t, F2, SearchOptions{true, true, false, info.qbound});
  search.run();
  SeshadriResult r;
  if (search.found().empty()) {
    r.kind = ResultKind::MaxBound;
    r.value = SqrtRat(F2);
    return r;
  }
  r.kind = ResultKind::Submaximal;
  r.value = search.found().front().value;
  r.witnesses = detail::bounds_from(search.found(), o);
  return r;
}

inline SeshadriResult epsilon_class(const BundleClass& L, const OrderSpec& o) {
  if (!is_ample(L, o)) throw Error(ErrorCode::NotAmple, "class " + to_string(L) + " is not ample");
  Normalized n = normalize(L);
  return epsilon(n.t, o).scaled(n.scale);
}

// ---------------------------------------------------------------------------
// Certified curves near a point

/// All certified curves with denominator <= qmax that are submaximal at t.
inline std::vector<CurveCertificate> submax_curves_at(const Rat& t, const OrderSpec& o, const Int& qmax) {
  require_ample_ray(t, o);
  std::vector<CurveCertificate> out;
  // |J_lambda| < sqrt(11)/(q sqrt e) < 2/q since e >= 2, so |a - b t| < 2
  for (Int b = 1; b <= qmax; ++b) {
    Int centre = floor_rat(t * Rat(b));
    for (Int a = centre - 2; a <= centre + 3; ++a) {
      if (gcd(a, b) != 1) continue;
      Rat mu = make_rat(a, b);
      if (!is_ample_ray(mu, o)) continue;
      Int D = self_intersection_int(b, a, o);
      if (is_square(D)) continue;
      PellBound pb = make_pell_bound(b, a, pell1(D), o);
      SubmaxInterval J = submax_interval(pb, o);
      if (!J.contains(t)) continue;
      if (auto c = certify_bound(pb, o)) out.push_back(std::move(*c));
    }
  }
  std::sort(out.begin(), out.end(), [](const CurveCertificate& x, const CurveCertificate& y) { return x.lambda < y.lambda; });
  return out;
}

// ---------------------------------------------------------------------------
// Segment structure

struct Segment {
  Surd lo;
  Surd hi;
  std::optional<PellBound> bound;  // none for a gap
  bool certified = false;
};

/// Exact lower envelope of the given certified bounds. Each bound yields at
/// most one segment: its interval J cut by the crossings with the others.
inline std::vector<Segment> envelope_segments(const std::vector<CurveCertificate>& certs, const OrderSpec& o) {
  std::vector<Segment> out;
  std::int64_t e = o.e();
  for (std::size_t i = 0; i < certs.size(); ++i) {
    const PellBound& f = certs[i].bound;
    Surd lo = certs[i].interval.lo, hi = certs[i].interval.hi;
    bool empty = false;
    for (std::size_t j = 0; j < certs.size() && !empty; ++j) {
      if (j == i) continue;
      const SubmaxInterval& Jg = certs[j].interval;
      if (!(Jg.lo < hi && lo < Jg.hi)) continue;
      const PellBound& g = certs[j].bound;
      if (f.c1 == g.c1) {
        if (g.c0 < f.c0) empty = true;
        continue;
      }
      Surd x = Surd::rational((g.c0 - f.c0) / (f.c1 - g.c1), e);
      if (f.c1 > g.c1) {
        if (x < hi) hi = x;  // f is above g to the right of x
      } else {
        if (lo < x) lo = x;
      }
      if (!(lo < hi)) empty = true;
    }
    if (!empty) out.push_back(Segment{lo, hi, f, true});
  }
  std::sort(out.begin(), out.end(), [](const Segment& x, const Segment& y) { return x.lo < y.lo; });
  return out;
}

/// Fill the parts of [lo, hi] not covered by segments with gap records.
inline std::vector<Segment> with_gaps(const std::vector<Segment>& segs, const Surd& lo, const Surd& hi) {
  std::vector<Segment> out;
  Surd cursor = lo;
  for (const auto& s : segs) {
    if (!(s.hi > lo) || !(s.lo < hi)) continue;
    Segment c = s;  // clipped to [lo, hi]
    if (c.lo < lo) c.lo = lo;
    if (hi < c.hi) c.hi = hi;
    if (cursor < c.lo) out.push_back(Segment{cursor, c.lo, std::nullopt, false});
    out.push_back(c);
    if (cursor < c.hi) cursor = c.hi;
  }
  if (cursor < hi) out.push_back(Segment{cursor, hi, std::nullopt, false});
  return out;
}

/// Reduced fractions a/b in the closed range [lo, hi] with b <= qmax that lie in
/// the open nef interval and carry a Pell bound. Ascending by (b, a).
inline std::vector<Rat> usable_fractions(const Rat& lo, const Rat& hi, const Int& qmax, const OrderSpec& o) {
  std::vector<Rat> out;
  for (Int b = 1; b <= qmax; ++b) {
    Int amin = ceil_rat(lo * Rat(b)), amax = floor_rat(hi * Rat(b));
    for (Int a = amin; a <= amax; ++a) {
      if (gcd(a, b) != 1) continue;
      Rat mu = make_rat(a, b);
      if (!is_ample_ray(mu, o)) continue;
      if (is_square(self_intersection_int(b, a, o))) continue;
      out.push_back(mu);
    }
  }
  return out;
}

/// Certified curves with denominator <= qmax whose submaximality interval
/// meets [lo, hi]. Work is spread over `threads` workers; order is by lambda.
inline std::vector<CurveCertificate> certified_curves(const Rat& lo, const Rat& hi, const Int& qmax, const OrderSpec& o,
                                                      unsigned threads = 1) {
  // a bound with denominator b has |J| < sqrt(11/e)/b, so only fractions
  // within that distance of [lo, hi] can reach it
  Rat reach = Rat(floor_sqrt(Rat(11, 1) / Rat(o.e_int())) + 1);
  auto [nlo, nhi] = nef_interval(o);
  std::vector<Rat> cands;
  for (Int b = 1; b <= qmax; ++b) {
    Rat r = reach / Rat(b);
    Int amin = ceil_rat((lo - r) * Rat(b)), amax = floor_rat((hi + r) * Rat(b));
    for (Int a = amin; a <= amax; ++a) {
      if (gcd(a, b) != 1) continue;
      Rat mu = make_rat(a, b);
      if (!is_ample_ray(mu, o)) continue;
      if (is_square(self_intersection_int(b, a, o))) continue;
      cands.push_back(mu);
    }
  }
  Surd slo = Surd::rational(lo, o.e()), shi = Surd::rational(hi, o.e());
  std::vector<std::optional<CurveCertificate>> res(cands.size());
  parallel_for(cands.size(), threads, [&](std::size_t i) {
    PellBound pb = pell_bound(cands[i], o);
    SubmaxInterval J = submax_interval(pb, o);
    if (!(J.lo < shi && slo < J.hi)) return;
    res[i] = certify_bound(pb, o);
  });
  std::vector<CurveCertificate> out;
  for (auto& r : res)
    if (r) out.push_back(std::move(*r));
  std::sort(out.begin(), out.end(), [](const CurveCertificate& x, const CurveCertificate& y) { return x.lambda < y.lambda; });
  return out;
}


/// Segments of the Seshadri function over [lo, hi] at resolution qmax.
inline std::vector<Segment> sample_function(const Rat& lo, const Rat& hi, const Int& qmax, const OrderSpec& o,
                                            unsigned threads = 1) {
  if (!(lo < hi) || qmax < 1 || !is_ample_ray(lo, o) || !is_ample_ray(hi, o))
    throw Error(ErrorCode::InvalidRange, "range must satisfy lo < hi inside the open nef interval, qmax >= 1");
  auto certs = certified_curves(lo, hi, qmax, o, threads);
  auto segs = envelope_segments(certs, o);
  return with_gaps(segs, Surd::rational(lo, o.e()), Surd::rational(hi, o.e()));
}

}  // namespace seshadri
