#pragma once

// Arithmetic in F_p (odd prime p < 2^31) and in the quadratic extension
// F_p(sqrt(D)) for a non-residue D.

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "ppgen/errors.hpp"

namespace ppgen {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

bool is_prime(u64 n);
std::vector<u64> distinct_prime_factors(u64 n);
u64 euler_phi(u64 n);

class PrimeModulus {
 public:
  // Throws UsageError unless p is an odd prime below 2^31.
  explicit PrimeModulus(u64 p);

  u32 value() const noexcept { return p_; }

  u32 reduce(i64 x) const noexcept {
    const i64 r = x % static_cast<i64>(p_);
    return static_cast<u32>(r < 0 ? r + p_ : r);
  }
  u32 add(u32 a, u32 b) const noexcept {
    const u32 s = a + b;  // a, b < 2^31
    return s >= p_ ? s - p_ : s;
  }
  u32 sub(u32 a, u32 b) const noexcept { return a >= b ? a - b : a + p_ - b; }
  u32 neg(u32 a) const noexcept { return a == 0 ? 0 : p_ - a; }
  u32 mul(u32 a, u32 b) const noexcept { return static_cast<u32>(static_cast<u64>(a) * b % p_); }
  u32 pow(u32 base, u64 e) const noexcept;
  // Throws DomainError for a == 0.
  u32 inv(u32 a) const;
  // x^(p-2): the inversion map with 0 -> 0.
  u32 inv_or_zero(u32 a) const noexcept { return pow(a, p_ - 2); }

  // Euler's criterion; 0 is not a residue.
  bool is_residue(u32 a) const noexcept;
  // Tonelli-Shanks; nullopt for non-residues.
  std::optional<u32> sqrt(u32 a) const;
  // First non-residue among 2, 3, 4, ...
  u32 first_non_residue() const;

  friend auto operator<=>(const PrimeModulus&, const PrimeModulus&) = default;

 private:
  u32 p_;
};

inline std::ostream& operator<<(std::ostream& os, const PrimeModulus& m) { return os << m.value(); }

class FieldElement {
 public:
  FieldElement(PrimeModulus m, i64 v) : m_(m), v_(m.reduce(v)) {}

  u32 value() const noexcept { return v_; }
  PrimeModulus modulus() const noexcept { return m_; }
  bool is_zero() const noexcept { return v_ == 0; }

  FieldElement pow(u64 e) const { return {m_, m_.pow(v_, e), Raw{}}; }
  // Throws DomainError for zero.
  FieldElement inv() const { return {m_, m_.inv(v_), Raw{}}; }

  friend FieldElement operator+(const FieldElement& x, const FieldElement& y) {
    check_same(x, y);
    return {x.m_, x.m_.add(x.v_, y.v_), Raw{}};
  }
  friend FieldElement operator-(const FieldElement& x, const FieldElement& y) {
    check_same(x, y);
    return {x.m_, x.m_.sub(x.v_, y.v_), Raw{}};
  }
  friend FieldElement operator*(const FieldElement& x, const FieldElement& y) {
    check_same(x, y);
    return {x.m_, x.m_.mul(x.v_, y.v_), Raw{}};
  }
  friend FieldElement operator/(const FieldElement& x, const FieldElement& y) {
    check_same(x, y);
    return x * y.inv();
  }
  FieldElement operator-() const { return {m_, m_.neg(v_), Raw{}}; }

  friend bool operator==(const FieldElement&, const FieldElement&) = default;

 private:
  struct Raw {};
  FieldElement(PrimeModulus m, u32 v, Raw) : m_(m), v_(v) {}
  static void check_same(const FieldElement& x, const FieldElement& y) {
    if (x.m_ != y.m_) throw UsageError("field elements belong to different moduli");
  }

  PrimeModulus m_;
  u32 v_;
};

inline std::ostream& operator<<(std::ostream& os, const FieldElement& x) { return os << x.value(); }

// Multiplicative order of a nonzero element of F_p.
u64 multiplicative_order(const FieldElement& x);

// u + v*sqrt(D) in F_p(sqrt(D)).
class QuadExtElement {
 public:
  // Throws DomainError unless D is a quadratic non-residue mod p.
  QuadExtElement(PrimeModulus m, u32 u, u32 v, u32 d);
  // Uses the first non-residue of p as D.
  static QuadExtElement canonical(PrimeModulus m, u32 u, u32 v);
  static QuadExtElement from_base(PrimeModulus m, u32 u, u32 d) { return {m, u, 0, d}; }

  u32 u() const noexcept { return u_; }
  u32 v() const noexcept { return v_; }
  u32 discriminant() const noexcept { return d_; }
  PrimeModulus modulus() const noexcept { return m_; }
  bool is_zero() const noexcept { return u_ == 0 && v_ == 0; }
  bool is_one() const noexcept { return u_ == 1 && v_ == 0; }

  // u^2 - D v^2, an element of F_p.
  u32 norm() const noexcept;
  QuadExtElement conjugate() const { return {m_, u_, m_.neg(v_), d_, Raw{}}; }
  QuadExtElement pow(u64 e) const;
  QuadExtElement inv() const;

  friend QuadExtElement operator+(const QuadExtElement& x, const QuadExtElement& y);
  friend QuadExtElement operator-(const QuadExtElement& x, const QuadExtElement& y);
  friend QuadExtElement operator*(const QuadExtElement& x, const QuadExtElement& y);
  friend QuadExtElement operator/(const QuadExtElement& x, const QuadExtElement& y) { return x * y.inv(); }
  friend bool operator==(const QuadExtElement&, const QuadExtElement&) = default;

 private:
  struct Raw {};
  QuadExtElement(PrimeModulus m, u32 u, u32 v, u32 d, Raw) : m_(m), u_(u), v_(v), d_(d) {}
  void check_same(const QuadExtElement& y) const;

  PrimeModulus m_;
  u32 u_;
  u32 v_;
  u32 d_;
};

QuadExtElement quad_mul(const QuadExtElement& x, const QuadExtElement& y);
// Least k >= 1 with x^k = 1; divides p^2 - 1. Throws DomainError for zero.
u64 quad_order(const QuadExtElement& x);

}  // namespace ppgen
