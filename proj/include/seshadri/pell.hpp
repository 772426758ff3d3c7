#pragma once

// Primitive solutions of x^2 - D y^2 = 1 and x^2 - D y^2 = 4 by continued
// fractions. pell1 walks the expansion of sqrt(D); pell4 reduces to pell1 or
// to the fundamental unit of Z[(1+sqrt D)/2] depending on D mod 4.

#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <utility>

#include "seshadri/exactfield.hpp"

namespace seshadri {

struct PellSolution {
  Int x;
  Int y;
  Int D;
  int N = 1;

  friend bool operator==(const PellSolution&, const PellSolution&) = default;
};

namespace detail {

inline void check_pell_discriminant(const Int& D) {
  if (D < 2 || is_square(D))
    throw Error(ErrorCode::SquareDiscriminant, "Pell equation needs a non-square D >= 2, got " + D.get_str());
}

// Convergents h/k of (P0 + sqrt D)/Q0 until x^2 - D y^2 == N, where (x, y) is
// read off a convergent by `to_xy`. Requires Q0 | D - P0^2.
template <class ToXY>
PellSolution cf_search(const Int& D, const Int& P0, const Int& Q0, int N, ToXY to_xy) {
  Int r = isqrt(D);
  Int P = P0, Q = Q0;
  auto floor_q = [&](const Int& Pv, const Int& Qv) {
    // floor((P + sqrt D)/Q); Q > 0 throughout for the starting values used here
    Int num = Pv + r;
    Int res;
    mpz_fdiv_q(res.get_mpz_t(), num.get_mpz_t(), Qv.get_mpz_t());
    return res;
  };
  Int a = floor_q(P, Q);
  Int h_prev = 1, h = a, k_prev = 0, k = 1;
  for (;;) {
    auto [x, y] = to_xy(h, k);
    if (y > 0 && x > 0 && x * x - D * y * y == N) return PellSolution{x, y, D, N};
    P = a * Q - P;
    Q = (D - P * P) / Q;
    a = floor_q(P, Q);
    Int hn = a * h + h_prev, kn = a * k + k_prev;
    h_prev = std::move(h);
    h = std::move(hn);
    k_prev = std::move(k);
    k = std::move(kn);
  }
}

inline PellSolution pell1_uncached(const Int& D) {
  return cf_search(D, Int(0), Int(1), 1, [](const Int& h, const Int& k) { return std::pair(h, k); });
}

inline PellSolution pell4_uncached(const Int& D) {
  Int m4 = D % 4;
  if (m4 == 0) {
    // x is even: x = 2x', x'^2 - (D/4) y^2 = 1
    PellSolution s = pell1_uncached(D / 4);
    return PellSolution{2 * s.x, s.y, D, 4};
  }
  if (m4 == 1) {
    // h - k w with w = (1+sqrt D)/2 has norm ((2h-k)^2 - D k^2)/4
    return cf_search(D, Int(1), Int(2), 4, [](const Int& h, const Int& k) { return std::pair(Int(2 * h - k), k); });
  }
  // D = 2,3 mod 4 forces x, y even
  PellSolution s = pell1_uncached(D);
  return PellSolution{2 * s.x, 2 * s.y, D, 4};
}

class PellCache {
 public:
  template <class F>
  PellSolution get(const Int& D, int N, F compute) {
    auto key = std::pair(D, N);
    {
      std::lock_guard lock(mu_);
      auto it = table_.find(key);
      if (it != table_.end()) return it->second;
    }
    PellSolution s = compute(D);
    std::lock_guard lock(mu_);
    if (table_.size() > kMaxEntries) table_.clear();
    table_.emplace(key, s);
    return s;
  }

 private:
  static constexpr std::size_t kMaxEntries = 1 << 16;
  std::mutex mu_;
  std::map<std::pair<Int, int>, PellSolution> table_;
};

inline PellCache& pell_cache() {
  static PellCache cache;
  return cache;
}

// sqrt(D) expansion on machine words; h is never needed, only k and the
// parity trick h^2 - D k^2 = (-1)^(i+1) Q_{i+1}. Callers guarantee D < 2^62.
inline std::optional<std::pair<Int, Int>> pell1_bounded_small(std::int64_t D, std::int64_t kmax) {
  using i128 = __int128;
  std::int64_t r = static_cast<std::int64_t>(isqrt(Int(static_cast<long>(D))).get_si());
  std::int64_t m = 0, d = 1, a = r;
  i128 h_prev = 1, h = r, k_prev = 0, k = 1;
  for (int i = 0;; ++i) {
    if (k > kmax) return std::nullopt;
    m = d * a - m;
    d = (D - m * m) / d;
    // h_i^2 - D k_i^2 = (-1)^(i+1) d_{i+1}
    if (d == 1 && (i % 2 == 1)) {
      auto to_int = [](i128 v) {
        Int hi(static_cast<unsigned long>(static_cast<std::uint64_t>(v >> 64)));
        Int lo(static_cast<unsigned long>(static_cast<std::uint64_t>(v)));
        Int out = hi;
        out <<= 64;
        return Int(out + lo);
      };
      return std::pair(to_int(h), to_int(k));
    }
    a = (r + m) / d;
    i128 hn = a * h + h_prev, kn = a * k + k_prev;
    h_prev = h;
    h = hn;
    k_prev = k;
    k = kn;
  }
}

}  // namespace detail

/// Minimal positive solution of x^2 - D y^2 = 1.
inline PellSolution pell1(const Int& D) {
  detail::check_pell_discriminant(D);
  return detail::pell_cache().get(D, 1, detail::pell1_uncached);
}

/// Minimal positive solution of x^2 - D y^2 = 4.
inline PellSolution pell4(const Int& D) {
  detail::check_pell_discriminant(D);
  return detail::pell_cache().get(D, 4, detail::pell4_uncached);
}

/// pell1(D) if its y is at most kmax, otherwise nothing. Walks convergents
/// only while their denominators stay <= kmax, so it is cheap when the
/// fundamental solution is large.
inline std::optional<PellSolution> pell1_bounded(const Int& D, const Int& kmax) {
  detail::check_pell_discriminant(D);
  if (kmax < 1) return std::nullopt;
  static const Int word_limit = Int(1) << 60;
  if (D < word_limit && kmax < word_limit) {
    auto r = detail::pell1_bounded_small(D.get_si(), kmax.get_si());
    if (!r) return std::nullopt;
    return PellSolution{std::move(r->first), std::move(r->second), D, 1};
  }
  Int r = isqrt(D);
  Int m = 0, d = 1, a = r;
  Int h_prev = 1, h = r, k_prev = 0, k = 1;
  for (;;) {
    if (k > kmax) return std::nullopt;
    if (h * h - D * k * k == 1) return PellSolution{h, k, D, 1};
    m = d * a - m;
    d = (D - m * m) / d;
    a = (r + m) / d;
    Int hn = a * h + h_prev, kn = a * k + k_prev;
    h_prev = std::move(h);
    h = std::move(hn);
    k_prev = std::move(k);
    k = std::move(kn);
  }
}

/// Minimal positive solution of x^2 - D y^2 = -1, if there is one (odd
/// period of sqrt D).
inline std::optional<std::pair<Int, Int>> pell_neg1(const Int& D) {
  detail::check_pell_discriminant(D);
  Int r = isqrt(D);
  Int m = 0, d = 1, a = r;
  Int h_prev = 1, h = r, k_prev = 0, k = 1;
  for (;;) {
    Int n = h * h - D * k * k;
    if (n == -1) return std::pair(h, k);
    if (n == 1) return std::nullopt;
    m = d * a - m;
    d = (D - m * m) / d;
    a = (r + m) / d;
    Int hn = a * h + h_prev, kn = a * k + k_prev;
    h_prev = std::move(h);
    h = std::move(hn);
    k_prev = std::move(k);
    k = std::move(kn);
  }
}

/// One solution per class of x^2 - D y^2 = N (N != 0), by the LMM method:
/// for every f with f^2 | N and every root z of z^2 = D mod |N/f^2|, expand
/// (z + sqrt D)/|N/f^2| until a complete quotient has Q = +-1. Every solution
/// is +-(x + y sqrt D) u^n for a returned (x, y) or its conjugate, u the
/// fundamental unit of norm 1.
inline std::vector<std::pair<Int, Int>> generalized_pell_classes(const Int& D, const Int& N) {
  detail::check_pell_discriminant(D);
  if (N == 0) throw Error(ErrorCode::BadInput, "generalized Pell equation needs N != 0");
  std::vector<std::pair<Int, Int>> out;
  std::optional<std::optional<std::pair<Int, Int>>> neg;  // computed on demand
  Int absN = N < 0 ? Int(-N) : N;
  Int r = isqrt(D);
  for (Int f = 1; f * f <= absN; ++f) {
    if (absN % (f * f) != 0) continue;
    Int m = N / (f * f), am = m < 0 ? Int(-m) : m;
    // roots z of z^2 = D mod |m| in (-|m|/2, |m|/2]
    std::vector<Int> roots;
    if (am == 1) {
      roots.push_back(0);
    } else if (am < (Int(1) << 31) && D < (Int(1) << 62)) {
      std::int64_t M = am.get_si();
      std::int64_t Dm = static_cast<std::int64_t>(Int(D % am).get_si());
      for (std::int64_t z = -((M - 1) / 2); z <= M / 2; ++z) {
        std::int64_t zz = static_cast<std::int64_t>((static_cast<__int128>(z) * z) % M);
        if (zz == Dm) roots.push_back(Int(static_cast<long>(z)));
      }
    } else {
      Int lo = -((am - 1) / 2), hi = am / 2;
      for (Int z = lo; z <= hi; ++z)
        if ((z * z - D) % am == 0) roots.push_back(z);
    }
    for (const Int& z : roots) {
      Int P = z, Q = am;
      Int G_prev = -z, G = am, B_prev = 1, B = 0;  // G_{-2}, G_{-1}, B_{-2}, B_{-1}
      std::set<std::pair<Int, Int>> seen;
      for (int i = 0;; ++i) {
        if (i >= 1 && (Q == 1 || Q == -1)) {
          // G_{i-1}, B_{i-1}
          Int n = G * G - D * B * B;
          if (n == m) {
            out.emplace_back(f * G, f * B);
          } else if (n == -m) {
            if (!neg) neg = pell_neg1(D);
            if (*neg) {
              const auto& [t, u] = **neg;
              out.emplace_back(f * (G * t + B * u * D), f * (G * u + B * t));
            }
          }
          break;
        }
        if (!seen.emplace(P, Q).second) break;  // period closed without Q = +-1
        // a = floor((P + sqrt D) / Q), sqrt D irrational
        Int num = P + r, a;
        if (Q > 0) {
          mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), Q.get_mpz_t());
        } else {
          Int aq = -Q;
          mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), aq.get_mpz_t());
          a = -(a + 1);
        }
        Int Gn = a * G + G_prev, Bn = a * B + B_prev;
        G_prev = std::move(G);
        G = std::move(Gn);
        B_prev = std::move(B);
        B = std::move(Bn);
        P = a * Q - P;
        Q = (D - P * P) / Q;
      }
    }
  }
  return out;
}

}  // namespace seshadri
