#pragma once

// One or two submaximal curves: the prime-factor criterion, the search for a
// pair of Pell bounds whose intervals overlap without being covered, the scan
// over e and the family e_n = 1 + 8 n^2.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "seshadri/parallel.hpp"
#include "seshadri/seshadri.hpp"
#include "seshadri/symmetry.hpp"

namespace seshadri {

inline std::vector<std::int64_t> prime_factors(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline bool has_bad_prime(std::int64_t e) {
  for (auto p : prime_factors(e))
    if (p % 8 == 5 || p % 8 == 7) return true;
  return false;
}

/// True when the order forces exactly one submaximal curve for every bundle.
inline bool guaranteed_single(const OrderSpec& o) {
  if (o.ring() == Ring::Sqrt) return true;
  return has_bad_prime(o.e());
}

struct Classification {
  std::int64_t e;
  bool no_bad_prime;
  bool minus2_qr;
  std::optional<std::pair<std::int64_t, std::int64_t>> repr_A_8B;  // e = A^2 + 8 B^2, gcd(A, B) = 1
};

inline std::int64_t pow_mod(std::int64_t b, std::int64_t x, std::int64_t m) {
  Int r;
  Int base(static_cast<long>(((b % m) + m) % m));
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), Int(static_cast<long>(x)).get_mpz_t(), Int(static_cast<long>(m)).get_mpz_t());
  return r.get_si();
}

/// x^2 = -2 (mod e) is solvable. e is odd, so it suffices that -2 is a
/// residue modulo every prime factor (Euler's criterion; Hensel lifts).
inline bool minus2_is_qr(std::int64_t e) {
  for (auto p : prime_factors(e)) {
    if (p == 2) return false;
    if (pow_mod(-2, (p - 1) / 2, p) != 1) return false;
  }
  return true;
}

inline Classification classify_e(std::int64_t e) {
  if (e <= 0 || e % 4 != 1 || is_square(Int(static_cast<long>(e))))
    throw Error(ErrorCode::BadInput, "classify needs a non-square e = 1 mod 4, got " + std::to_string(e));
  Classification c{e, !has_bad_prime(e), minus2_is_qr(e), std::nullopt};
  for (std::int64_t B = 1; 8 * B * B < e; ++B) {
    std::int64_t rest = e - 8 * B * B;
    std::int64_t A = isqrt(Int(static_cast<long>(rest))).get_si();
    if (A >= 1 && A * A == rest && std::gcd(A, B) == 1) {
      c.repr_A_8B = std::pair(A, B);
      break;
    }
  }
  return c;
}

/// e = 1 mod 4, non-square, no prime factor = 5, 7 mod 8.
inline bool eligible_half_e(std::int64_t e) {
  return e >= 5 && e % 4 == 1 && !is_square(Int(static_cast<long>(e))) && !has_bad_prime(e);
}

// ---------------------------------------------------------------------------
// Two-curve witnesses

struct TwoCurveWitness {
  PellBound bound1;  // smaller lambda
  PellBound bound2;
  SubmaxInterval J1;
  SubmaxInterval J2;
  SubmaxInterval overlap;
  Int covering_check_qbound;
};

namespace detail {

inline bool overlap_not_nested(const SubmaxInterval& a, const SubmaxInterval& b) {
  if (!(a.lo < b.hi && b.lo < a.hi)) return false;
  bool a_in_b = b.lo <= a.lo && a.hi <= b.hi;
  bool b_in_a = a.lo <= b.lo && b.hi <= a.hi;
  return !a_in_b && !b_in_a;
}

inline SubmaxInterval intersect(const SubmaxInterval& a, const SubmaxInterval& b) {
  return {a.lo < b.lo ? b.lo : a.lo, a.hi < b.hi ? a.hi : b.hi};
}

inline SubmaxInterval unite(const SubmaxInterval& a, const SubmaxInterval& b) {
  return {a.lo < b.lo ? a.lo : b.lo, a.hi < b.hi ? b.hi : a.hi};
}

// Decides one candidate pair. Certification and the covering search are all
// exact and resumable; they run in rounds of growing budget so a pair is
// dropped as soon as any of the three fails, without finishing the others.
class PairJudge {
 public:
  explicit PairJudge(const OrderSpec& o) : o_(o) {}

  bool judge(std::size_t i, const PellBound& b1, std::size_t j, const PellBound& b2, const SubmaxInterval& U,
             const Int& Q) {
    CoveringSearch cover(U.lo, U.hi, Q, o_);
    Certifier& c1 = certifier(i, b1);
    Certifier& c2 = certifier(j, b2);
    for (std::uint64_t budget = 16;; budget *= 2) {
      cover.step(budget);
      if (cover.found()) return false;
      c1.step(budget);
      if (c1.beaten()) return false;
      c2.step(budget);
      if (c2.beaten()) return false;
      if (cover.finished() && c1.certified() && c2.certified()) return true;
    }
  }

 private:
  Certifier& certifier(std::size_t idx, const PellBound& pb) {
    auto it = certs_.find(idx);
    if (it == certs_.end()) it = certs_.emplace(idx, Certifier(pb, o_)).first;
    return it->second;
  }

  OrderSpec o_;
  std::map<std::size_t, Certifier> certs_;
};

}  // namespace detail

/// Searches Pell bounds with lambda in the fundamental interval and
/// denominator <= qmax for a certified, overlapping, non-nested pair whose
/// union no Pell bound covers. Pairs are tried by (rank of the later member,
/// rank of the earlier), rank being ascending (q, p). With `focus`, only
/// pairs whose overlap contains that point are considered. With `kmax`,
/// bounds whose Pell solution has k > kmax are skipped: their intervals are
/// short and the Pell solutions can be huge. The answer stays sound, the
/// search just sees fewer candidates.
inline std::optional<TwoCurveWitness> has_two_submax_witness(const OrderSpec& o, const Int& qmax,
                                                             const std::optional<Rat>& focus = std::nullopt,
                                                             const std::optional<Int>& kmax = std::nullopt) {
  FundamentalInterval F = fundamental_interval(o);
  std::vector<PellBound> bounds;
  std::vector<SubmaxInterval> J;
  for (const Rat& mu : usable_fractions(F.lo, F.hi, qmax, o)) {
    if (kmax) {
      Int q = mu.get_den(), p = mu.get_num();
      auto sol = pell1_bounded(self_intersection_int(q, p, o), *kmax);
      if (!sol) continue;
      bounds.push_back(make_pell_bound(q, p, *sol, o));
    } else {
      bounds.push_back(pell_bound(mu, o));
    }
    J.push_back(submax_interval(bounds.back(), o));
  }
  // overlapping pairs by a sweep over left endpoints
  std::vector<std::size_t> by_lo(bounds.size());
  for (std::size_t i = 0; i < by_lo.size(); ++i) by_lo[i] = i;
  std::sort(by_lo.begin(), by_lo.end(), [&](std::size_t a, std::size_t b) { return J[a].lo < J[b].lo; });
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (later rank, earlier rank)
  std::vector<std::size_t> active;
  std::optional<Surd> focus_s;
  if (focus) focus_s = Surd::rational(*focus, o.e());
  for (std::size_t idx : by_lo) {
    std::erase_if(active, [&](std::size_t a) { return J[a].hi <= J[idx].lo; });
    for (std::size_t a : active) {
      if (!detail::overlap_not_nested(J[a], J[idx])) continue;
      if (focus_s && !detail::intersect(J[a], J[idx]).contains(*focus_s)) continue;
      pairs.emplace_back(std::max(a, idx), std::min(a, idx));
    }
    active.push_back(idx);
  }
  std::sort(pairs.begin(), pairs.end());
  detail::PairJudge judge(o);
  for (auto [later, earlier] : pairs) {
    std::size_t i = earlier, j = later;
    if (bounds[j].lambda < bounds[i].lambda) std::swap(i, j);
    SubmaxInterval U = detail::unite(J[i], J[j]);
    Int Q = qbound_from_length(U.length(), o);
    if (judge.judge(i, bounds[i], j, bounds[j], U, Q))
      return TwoCurveWitness{bounds[i], bounds[j], J[i], J[j], detail::intersect(J[i], J[j]), Q};
  }
  return std::nullopt;
}

struct ScanRecord {
  std::int64_t e;
  Int qmax;  // resolution of the last search for this e
  std::optional<TwoCurveWitness> witness;
};

struct ScanOptions {
  unsigned threads = 1;
  // when set, an e without witness is searched again with doubled qmax
  // until this value is exceeded
  std::optional<Int> escalate_to;
  // Pell solutions with k above this are left out of the witness search
  std::optional<Int> kmax = Int(256);
};

inline std::vector<std::int64_t> eligible_range(std::int64_t e_max) {
  std::vector<std::int64_t> out;
  for (std::int64_t e = 5; e <= e_max; e += 4)
    if (eligible_half_e(e)) out.push_back(e);
  return out;
}

inline ScanRecord scan_one(std::int64_t e, const Int& qmax, const ScanOptions& opt = {}) {
  OrderSpec o(Ring::Half, e);
  Int q = qmax;
  for (;;) {
    auto w = has_two_submax_witness(o, q, std::nullopt, opt.kmax);
    if (w || !opt.escalate_to || 2 * q > *opt.escalate_to) return ScanRecord{e, q, std::move(w)};
    q *= 2;
  }
}

/// Witness search for every eligible e <= e_max (half ring), ordered by e.
inline std::vector<ScanRecord> scan_range(std::int64_t e_max, const Int& qmax, const ScanOptions& opt = {}) {
  std::vector<std::int64_t> es = eligible_range(e_max);
  std::vector<ScanRecord> out(es.size());
  parallel_for(es.size(), opt.threads, [&](std::size_t i) { out[i] = scan_one(es[i], qmax, opt); });
  return out;
}

struct EnCheck {
  std::int64_t n;
  std::int64_t e;
  TwoCurveWitness witness;
  Rat common_point;  // 2 / (4n - 1)
};

/// The pair pi_{1/(2n)}, pi_{1/(2n-1)} for e = 1 + 8 n^2. The covering
/// check is exhaustive up to the interval-length bound of the union, which
/// must not exceed qmax.
inline EnCheck check_en(std::int64_t n, const Int& qmax) {
  if (n < 1) throw Error(ErrorCode::BadInput, "n must be positive");
  std::int64_t e = 1 + 8 * n * n;
  if (is_square(Int(static_cast<long>(e))))
    throw Error(ErrorCode::SquareE, "e_n = " + std::to_string(e) + " is a perfect square");
  OrderSpec o(Ring::Half, e);
  PellBound b1 = pell_bound(make_rat(1, 2 * n), o);
  PellBound b2 = pell_bound(make_rat(1, 2 * n - 1), o);
  auto internal = [](const std::string& what) { return std::runtime_error("check_en: " + what); };
  if (b1.l() != 2 * n + 1 || b1.k() != 1 || b2.l() != 2 * n - 1 || b2.k() != 1)
    throw internal("Pell solutions differ from (2n+1, 1), (2n-1, 1)");
  SubmaxInterval J1 = submax_interval(b1, o), J2 = submax_interval(b2, o);
  Rat point = make_rat(2, 4 * n - 1);
  if (!J1.contains(point) || !J2.contains(point)) throw internal("bounds are not submaximal at 2/(4n-1)");
  if (!detail::overlap_not_nested(J1, J2)) throw internal("intervals are nested");
  SubmaxInterval U = detail::unite(J1, J2);
  Int Q = qbound_from_length(U.length(), o);
  if (Q > qmax)
    throw Error(ErrorCode::InvalidRange,
                "covering check needs denominators up to " + Q.get_str() + ", above qmax = " + qmax.get_str());
  if (find_covering_bound(U.lo, U.hi, Q, o)) throw internal("a Pell bound covers both intervals");
  return EnCheck{n, e, TwoCurveWitness{b1, b2, J1, J2, detail::intersect(J1, J2), Q}, point};
}

}  // namespace seshadri
