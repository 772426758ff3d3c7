#pragma once

// Neron-Severi lattice of the surface in the basis (L0, Linf).
//
//   sqrt ring, Z[sqrt e]:         [[2, 0], [0, -2e]]
//   half ring, Z[1/2 + sqrt(e)/2]: [[2, 1], [1, (1-e)/2]]
//
// A class is stored as (a, b) meaning a*L0 + b*Linf. The ray through an ample
// class meets the line a = 1 in L_t = L0 + t*Linf.

#include <cstdint>
#include <string>
#include <utility>

#include "seshadri/exactfield.hpp"

namespace seshadri {

enum class Ring { Sqrt, Half };

inline const char* ring_name(Ring r) { return r == Ring::Sqrt ? "sqrt" : "half"; }

inline Ring parse_ring(std::string_view s) {
  if (s == "sqrt") return Ring::Sqrt;
  if (s == "half") return Ring::Half;
  throw Error(ErrorCode::BadInput, "ring must be 'sqrt' or 'half', got '" + std::string(s) + "'");
}

class OrderSpec {
 public:
  OrderSpec(Ring ring, std::int64_t e) : ring_(ring), e_(e) {
    if (e <= 0 || is_square(Int(static_cast<long>(e))))
      throw Error(ErrorCode::SquareE, "e must be a positive non-square integer, got " + std::to_string(e));
    if (ring == Ring::Half && (e % 4 != 1 || e < 5))
      throw Error(ErrorCode::BadInput, "the half ring needs e = 1 mod 4 and e >= 5, got " + std::to_string(e));
  }

  Ring ring() const { return ring_; }
  std::int64_t e() const { return e_; }
  Int e_int() const { return Int(static_cast<long>(e_)); }

  // Gram entries; integral in both cases.
  Int g00() const { return 2; }
  Int g01() const { return ring_ == Ring::Sqrt ? Int(0) : Int(1); }
  Int g11() const { return ring_ == Ring::Sqrt ? Int(-2 * e_) : Int((1 - e_) / 2); }
  /// |det| of the Gram matrix: 4e or e.
  Int abs_det() const { return ring_ == Ring::Sqrt ? Int(4 * e_) : e_int(); }

  friend bool operator==(const OrderSpec&, const OrderSpec&) = default;

 private:
  Ring ring_;
  std::int64_t e_;
};

struct BundleClass {
  Rat a;  // coefficient of L0
  Rat b;  // coefficient of Linf

  friend bool operator==(const BundleClass&, const BundleClass&) = default;
};

inline std::string to_string(const BundleClass& L) { return to_string(L.a) + "," + to_string(L.b); }

inline Rat intersection(const BundleClass& L, const BundleClass& M, const OrderSpec& o) {
  return Rat(o.g00()) * L.a * M.a + Rat(o.g01()) * (L.a * M.b + L.b * M.a) + Rat(o.g11()) * L.b * M.b;
}

inline Rat self_intersection(const BundleClass& L, const OrderSpec& o) { return intersection(L, L, o); }

/// Integer form used on hot paths: (b L0 + a Linf)^2 for integers.
inline Int self_intersection_int(const Int& b, const Int& a, const OrderSpec& o) {
  return o.g00() * b * b + 2 * o.g01() * a * b + o.g11() * a * a;
}

/// L_t^2 for the ray point t.
inline Rat ray_square(const Rat& t, const OrderSpec& o) {
  return Rat(o.g00()) + Rat(2 * o.g01()) * t + Rat(o.g11()) * t * t;
}

inline bool is_ample(const BundleClass& L, const OrderSpec& o) {
  if (L.a <= 0) return false;
  Rat e(o.e_int());
  if (o.ring() == Ring::Sqrt) return L.a * L.a - e * L.b * L.b > 0;
  return L.a * L.a + L.a * L.b + (Rat(1) - e) / 4 * L.b * L.b > 0;
}

inline bool is_ample_ray(const Rat& t, const OrderSpec& o) { return ray_square(t, o) > 0; }

/// Closed endpoints of the nef cross-section.
inline std::pair<Surd, Surd> nef_interval(const OrderSpec& o) {
  std::int64_t e = o.e();
  if (o.ring() == Ring::Sqrt) {
    Rat c = Rat(1) / Rat(o.e_int());
    return {Surd(0, -c, e), Surd(0, c, e)};
  }
  Rat den = Rat(o.e_int() - 1);
  return {Surd(Rat(2) / den, Rat(-2) / den, e), Surd(Rat(2) / den, Rat(2) / den, e)};
}

struct Normalized {
  Rat scale;
  Rat t;
};

inline Normalized normalize(const BundleClass& L) {
  if (L.a <= 0) throw Error(ErrorCode::NotNormalizable, "class " + to_string(L) + " has nonpositive L0 coefficient");
  return {L.a, L.b / L.a};
}

struct PrimitiveRay {
  Int q;          // denominator of t
  Int p;          // numerator of t
  BundleClass L;  // q * L_t = (q, p)
};

inline PrimitiveRay primitive_and_denominator(const Rat& t) {
  Int q = t.get_den(), p = t.get_num();
  return {q, p, BundleClass{Rat(q), Rat(p)}};
}

inline PrimitiveRay primitive_and_denominator(const Rat& t, const OrderSpec&) { return primitive_and_denominator(t); }

/// Throws NotAmple unless L_t lies strictly inside the nef cross-section.
inline void require_ample_ray(const Rat& t, const OrderSpec& o) {
  if (!is_ample_ray(t, o))
    throw Error(ErrorCode::NotAmple, "L_t is not ample for t = " + to_string(t));
}

}  // namespace seshadri
