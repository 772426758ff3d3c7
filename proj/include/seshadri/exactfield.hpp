#pragma once

// Exact arithmetic over Q and over the real quadratic field Q(sqrt e).
//
// Rationals are GMP `mpq_class` values kept canonical (lowest terms, positive
// denominator). A Surd is a + b*sqrt(e) with rational a, b; e is fixed per
// computation and must be a positive non-square. Since 1 and sqrt(e) are
// linearly independent over Q, two surds are equal iff their components are.

#include <gmpxx.h>

#include <cmath>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "seshadri/error.hpp"

namespace seshadri {

using Int = mpz_class;
using Rat = mpq_class;

// ---------------------------------------------------------------------------
// Integer and rational helpers

inline int sign(const Int& x) { return sgn(x); }
inline int sign(const Rat& x) { return sgn(x); }

inline Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) throw Error(ErrorCode::DivisionByZero, "zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline Int isqrt(const Int& n) {
  if (n < 0) throw Error(ErrorCode::BadInput, "isqrt of negative integer");
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

inline bool is_square(const Int& n) {
  return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

inline bool is_square(const Rat& r) {
  return r >= 0 && is_square(Int(r.get_num())) && is_square(Int(r.get_den()));
}

/// Exact square root of a rational that is a perfect square.
inline std::optional<Rat> rat_sqrt(const Rat& r) {
  if (!is_square(r)) return std::nullopt;
  return make_rat(isqrt(r.get_num()), isqrt(r.get_den()));
}

inline Int floor_rat(const Rat& r) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline Int ceil_rat(const Rat& r) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

/// Rational with least denominator in the open interval (x, y), x < y.
inline Rat simplest_between(const Rat& x, const Rat& y) {
  Int f = floor_rat(x);
  if (Rat(f + 1) < y) return Rat(f + 1);
  Rat fx = x - f, fy = y - f;  // 0 <= fx < fy <= 1
  if (fx == 0) return Rat(f) + make_rat(1, floor_rat(1 / fy) + 1);
  return Rat(f) + 1 / simplest_between(1 / fy, 1 / fx);
}

inline Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }
inline Rat abs_rat(const Rat& x) { return x < 0 ? Rat(-x) : x; }

/// floor(sqrt(r)) for r >= 0; floor(sqrt(x)) == isqrt(floor(x)).
inline Int floor_sqrt(const Rat& r) {
  if (r < 0) throw Error(ErrorCode::BadInput, "floor_sqrt of negative rational");
  return isqrt(floor_rat(r));
}

/// "p/q", or "n" when the denominator is 1.
inline std::string to_string(const Rat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline std::string to_string(const Int& n) { return n.get_str(); }

/// Accepts "n", "p/q" (either sign) and plain decimals such as "0.37".
inline Rat parse_rat(std::string_view text) {
  std::string s(text);
  auto bad = [&] { return Error(ErrorCode::BadInput, "not a rational number: '" + s + "'"); };
  if (s.empty()) throw bad();
  try {
    auto slash = s.find('/');
    auto dot = s.find('.');
    if (slash != std::string::npos) {
      Int num(s.substr(0, slash), 10);
      Int den(s.substr(slash + 1), 10);
      if (den == 0) throw Error(ErrorCode::DivisionByZero, "zero denominator in '" + s + "'");
      return make_rat(num, den);
    }
    if (dot != std::string::npos) {
      std::string whole = s.substr(0, dot);
      std::string frac = s.substr(dot + 1);
      bool negative = !whole.empty() && whole[0] == '-';
      if (negative || (!whole.empty() && whole[0] == '+')) whole = whole.substr(1);
      if (whole.empty()) whole = "0";
      if (frac.empty()) frac = "0";
      for (char c : whole + frac)
        if (c < '0' || c > '9') throw bad();
      Int den;
      mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
      Int num(whole + frac, 10);
      return make_rat(negative ? Int(-num) : num, den);
    }
    return Rat(Int(s, 10));
  } catch (const std::invalid_argument&) {
    throw bad();
  }
}

inline long double to_long_double(const Rat& r) {
  // mpq_get_d truncates; good enough for human-readable output only.
  return static_cast<long double>(r.get_d());
}

// ---------------------------------------------------------------------------
// Surd: a + b sqrt(e)

class Surd {
 public:
  Surd() = default;
  Surd(Rat a, Rat b, std::int64_t e) : a_(std::move(a)), b_(std::move(b)), e_(e) {
    if (e_ <= 0 || is_square(Int(static_cast<long>(e_))))
      throw Error(ErrorCode::BadInput, "surd context needs a positive non-square e");
  }

  static Surd rational(Rat a, std::int64_t e) { return Surd(std::move(a), Rat(0), e); }
  /// sqrt(e) itself.
  static Surd root(std::int64_t e) { return Surd(Rat(0), Rat(1), e); }

  const Rat& a() const { return a_; }
  const Rat& b() const { return b_; }
  std::int64_t e() const { return e_; }

  bool is_rational() const { return b_ == 0; }

  /// Exact sign of a + b sqrt(e): compares a^2 with b^2 e when the component
  /// signs disagree.
  int sign() const {
    int sa = sgn(a_), sb = sgn(b_);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    Rat lhs = a_ * a_;
    Rat rhs = b_ * b_ * Rat(Int(static_cast<long>(e_)));
    if (lhs > rhs) return sa;
    if (lhs < rhs) return sb;
    return 0;  // unreachable for non-square e
  }

  Surd conjugate() const { return Surd(a_, -b_, e_, Unchecked{}); }

  /// a^2 - e b^2, the field norm.
  Rat norm() const { return a_ * a_ - b_ * b_ * Rat(Int(static_cast<long>(e_))); }

  Surd operator-() const { return Surd(-a_, -b_, e_, Unchecked{}); }

  friend Surd operator+(const Surd& x, const Surd& y) {
    check_context(x, y);
    return Surd(x.a_ + y.a_, x.b_ + y.b_, x.e_, Unchecked{});
  }
  friend Surd operator-(const Surd& x, const Surd& y) {
    check_context(x, y);
    return Surd(x.a_ - y.a_, x.b_ - y.b_, x.e_, Unchecked{});
  }
  friend Surd operator*(const Surd& x, const Surd& y) {
    check_context(x, y);
    Rat e(Int(static_cast<long>(x.e_)));
    return Surd(x.a_ * y.a_ + x.b_ * y.b_ * e, x.a_ * y.b_ + x.b_ * y.a_, x.e_, Unchecked{});
  }
  friend Surd operator/(const Surd& x, const Surd& y) {
    check_context(x, y);
    Rat n = y.norm();
    if (n == 0) throw Error(ErrorCode::DivisionByZero, "division by zero surd");
    Surd num = x * y.conjugate();
    return Surd(num.a_ / n, num.b_ / n, x.e_, Unchecked{});
  }

  friend Surd operator+(const Surd& x, const Rat& r) { return Surd(x.a_ + r, x.b_, x.e_, Unchecked{}); }
  friend Surd operator-(const Surd& x, const Rat& r) { return Surd(x.a_ - r, x.b_, x.e_, Unchecked{}); }
  friend Surd operator*(const Surd& x, const Rat& r) { return Surd(x.a_ * r, x.b_ * r, x.e_, Unchecked{}); }
  friend Surd operator*(const Rat& r, const Surd& x) { return x * r; }
  friend Surd operator+(const Rat& r, const Surd& x) { return x + r; }
  friend Surd operator-(const Rat& r, const Surd& x) { return Surd(r - x.a_, -x.b_, x.e_, Unchecked{}); }
  friend Surd operator/(const Surd& x, const Rat& r) {
    if (r == 0) throw Error(ErrorCode::DivisionByZero, "division of surd by zero");
    return Surd(x.a_ / r, x.b_ / r, x.e_, Unchecked{});
  }

  friend bool operator==(const Surd& x, const Surd& y) {
    return x.e_ == y.e_ && x.a_ == y.a_ && x.b_ == y.b_;
  }

  friend std::strong_ordering operator<=>(const Surd& x, const Surd& y) {
    int s = (x - y).sign();
    return s < 0 ? std::strong_ordering::less
                 : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  long double approx() const {
    return to_long_double(a_) + to_long_double(b_) * std::sqrt(static_cast<long double>(e_));
  }

  friend std::ostream& operator<<(std::ostream& os, const Surd& x) {
    return os << to_string(x.a_) << (x.b_ < 0 ? " - " : " + ") << to_string(abs_rat(x.b_))
              << "*sqrt(" << x.e_ << ")";
  }

 private:
  struct Unchecked {};
  Surd(Rat a, Rat b, std::int64_t e, Unchecked) : a_(std::move(a)), b_(std::move(b)), e_(e) {}

  static void check_context(const Surd& x, const Surd& y) {
    if (x.e_ != y.e_)
      throw Error(ErrorCode::MixedContext,
                  "surds over sqrt(" + std::to_string(x.e_) + ") and sqrt(" + std::to_string(y.e_) + ")");
  }

  Rat a_{0};
  Rat b_{0};
  std::int64_t e_{2};
};

inline int surd_sign(const Surd& x) { return x.sign(); }

enum class SurdOp { Add, Sub, Mul, Div };

inline Surd surd_arith(const Surd& x, const Surd& y, SurdOp op) {
  switch (op) {
    case SurdOp::Add: return x + y;
    case SurdOp::Sub: return x - y;
    case SurdOp::Mul: return x * y;
    case SurdOp::Div: return x / y;
  }
  throw Error(ErrorCode::BadInput, "unknown surd operation");
}

/// Largest integer n with n <= x. Bracket, then bisect on exact signs.
inline Int floor_surd(const Surd& x) {
  if (x.is_rational()) return floor_rat(x.a());
  Int root_hi = isqrt(Int(static_cast<long>(x.e()))) + 1;
  Int spread = ceil_rat(abs_rat(x.b())) * root_hi + 1;
  Int lo = floor_rat(x.a()) - spread;  // x >= lo
  Int hi = floor_rat(x.a()) + spread;  // x <  hi
  while (hi - lo > 1) {
    Int mid = (lo + hi) / 2;
    if ((x - Rat(mid)).sign() >= 0)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

// ---------------------------------------------------------------------------
// SqrtRat: sqrt(r) for a nonnegative rational r

class SqrtRat {
 public:
  SqrtRat() = default;
  explicit SqrtRat(Rat radicand) : radicand_(std::move(radicand)) {
    if (radicand_ < 0) throw Error(ErrorCode::BadInput, "negative radicand");
  }

  const Rat& radicand() const { return radicand_; }
  std::optional<Rat> exact() const { return rat_sqrt(radicand_); }
  long double approx() const { return std::sqrt(to_long_double(radicand_)); }

  friend bool operator==(const SqrtRat&, const SqrtRat&) = default;

 private:
  Rat radicand_{0};
};

/// Exact ordering of r against sqrt(radicand); the sign of r is inspected
/// before squaring.
inline std::strong_ordering cmp_rat_sqrt(const Rat& r, const SqrtRat& s) {
  if (r < 0) return s.radicand() == 0 && r == 0 ? std::strong_ordering::equal : std::strong_ordering::less;
  Rat sq = r * r;
  if (sq < s.radicand()) return std::strong_ordering::less;
  if (sq > s.radicand()) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

/// Ordering of a surd v against sqrt(w) for a surd w >= 0.
inline std::strong_ordering cmp_surd_sqrt(const Surd& v, const Surd& w) {
  if (v.sign() < 0) return std::strong_ordering::less;
  int s = (v * v - w).sign();
  return s < 0 ? std::strong_ordering::less
               : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

}  // namespace seshadri
