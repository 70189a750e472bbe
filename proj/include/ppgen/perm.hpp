#pragma once

// Permutations of F_p = {0, ..., p-1}.
//
// Composition convention: compose(f, g)(x) = f(g(x)). Sequences of maps are
// always given in application order (first element acts first); see
// apply_in_order.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ppgen/ffield.hpp"

namespace ppgen {

class Permutation {
 public:
  // Throws NotAPermutation unless images is a bijection of {0, ..., p-1}.
  Permutation(PrimeModulus m, std::vector<u32> images);

  static Permutation identity(PrimeModulus m);
  // Skips the bijection check; for callers that construct images from known
  // permutations.
  static Permutation trusted(PrimeModulus m, std::vector<u32> images) {
    return {m, std::move(images), Trusted{}};
  }

  PrimeModulus modulus() const noexcept { return m_; }
  u32 degree() const noexcept { return m_.value(); }
  u32 operator()(u32 x) const { return images_[x]; }
  std::span<const u32> images() const noexcept { return images_; }
  bool is_identity() const noexcept;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  struct Trusted {};
  Permutation(PrimeModulus m, std::vector<u32> images, Trusted) : m_(m), images_(std::move(images)) {}

  PrimeModulus m_;
  std::vector<u32> images_;
};

// x -> x^d + c. Requires 1 <= d < p-1 with gcd(d, p-1) = 1; d = p-2 is
// always accepted (x^(p-2) with 0 -> 0). Throws NotAPermutation otherwise.
Permutation poly_perm(u64 d, const FieldElement& c);
Permutation poly_perm(u64 d, u32 c, PrimeModulus m);

Permutation affine_perm(const FieldElement& a, const FieldElement& b);
Permutation shift_sigma(PrimeModulus m, u32 k = 1);
Permutation inversion_delta(PrimeModulus m);
Permutation negation_perm(PrimeModulus m);

Permutation compose(const Permutation& f, const Permutation& g);
Permutation inverse(const Permutation& f);
Permutation power(const Permutation& f, u64 n);
// maps[0] acts first, then maps[1], ...
Permutation apply_in_order(PrimeModulus m, std::span<const Permutation> maps);

struct CycleDecomposition {
  // Each cycle starts at its minimum; cycles sorted by first element.
  std::vector<std::vector<u32>> cycles;
  std::vector<u32> fixed_points;

  friend bool operator==(const CycleDecomposition&, const CycleDecomposition&) = default;
};

enum class Parity { Even, Odd };

CycleDecomposition cycle_decomposition(const Permutation& f);
Permutation from_cycles(PrimeModulus m, const std::vector<std::vector<u32>>& cycles);
Parity sign(const Permutation& f);
// lcm of cycle lengths; throws DomainError on 64-bit overflow.
u64 element_order(const Permutation& f);

// "(0 2)(1 3 4)"; the identity renders as "()".
std::string to_cycle_string(const Permutation& f);
std::string to_cycle_string(const CycleDecomposition& c);
// Parses cycle notation with whitespace-separated points. Fixed points may be
// omitted; "" and "()" are the identity. Throws UsageError on bad input.
Permutation parse_cycles(std::string_view text, PrimeModulus m);

// The unique polynomial of degree < p inducing a permutation.
class PolynomialRep {
 public:
  PolynomialRep(PrimeModulus m, std::vector<u32> coefficients);

  PrimeModulus modulus() const noexcept { return m_; }
  // c_0 ... c_{p-1}
  std::span<const u32> coefficients() const noexcept { return coeffs_; }
  // -1 for the zero polynomial.
  int degree() const noexcept;
  u32 weight() const noexcept;
  u32 evaluate(u32 x) const noexcept;

 private:
  PrimeModulus m_;
  std::vector<u32> coeffs_;
};

PolynomialRep to_polynomial(const Permutation& f);

}  // namespace ppgen
