#pragma once

// Fibonacci polynomials F_0 = 0, F_1 = 1, F_{n+1} = alpha F_n + F_{n-1} mod p,
// the entries of [[alpha, 1], [1, 0]]^n, and the cycle structure of iterates
// of x^(p-2) + alpha.

#include <array>
#include <optional>
#include <vector>

#include "ppgen/perm.hpp"

namespace ppgen {

// Plain (not projective) 2x2 matrix over F_p, row-major.
using Mat2 = std::array<u32, 4>;

Mat2 mat2_mul(PrimeModulus m, const Mat2& x, const Mat2& y);
// [[alpha, 1], [1, 0]]^n by repeated squaring.
Mat2 fib_matrix_power(u64 n, const FieldElement& alpha);

FieldElement fib_eval(u64 n, const FieldElement& alpha);
// F_0 ... F_count-1.
std::vector<u32> fib_sequence(std::size_t count, const FieldElement& alpha);

bool is_ramified(const FieldElement& alpha);

// Least n in [1, bound] with F_n(alpha) = 0; bound = 0 means p^2 - 1.
std::optional<u64> min_zero_index(const FieldElement& alpha, u64 bound = 0);

// Multiplicative order of z+/z- where z+- are the roots of z^2 + alpha z - 1,
// computed in F_p when alpha^2 + 4 is a square and in F_p(sqrt(alpha^2 + 4))
// otherwise. Throws DomainError when alpha^2 + 4 = 0.
u64 ratio_order(const FieldElement& alpha);

// x -> x^(p-2) + alpha.
Permutation inversion_shift_perm(const FieldElement& alpha);

struct FibCycleReport {
  u32 alpha = 0;
  u32 prime = 0;
  bool ramified = false;
  std::optional<u64> n_zero;
  // n_zero exists and n_zero < p.
  bool hypothesis_met = false;
  bool divides_p2_minus_1 = false;
  // F_{n+1} = F_{n-1} at n = n_zero.
  bool successor_identity = false;
  // The brute-force n_zero-th iterate equals the predicted cycle.
  bool cycle_matches = false;
  CycleDecomposition cycle;      // brute force
  CycleDecomposition predicted;  // from Fibonacci ratios; empty if they collide
};

// With n = n_zero, the predicted cycle is (x_{n-1} x_{n-2} ... x_2 x_1) where
// x_i = -F_{i-1}/F_i, so x_1 = 0 and x_2 = -1/alpha.
FibCycleReport iterate_check(const FieldElement& alpha);

// Points x_i = -F_{i-1}/F_i for 1 <= i < count (F_i must be nonzero).
std::vector<u32> pole_orbit(const FieldElement& alpha, std::size_t count);

// Evaluates the implication (iterate fixes >= n + 4 points) => F_n(alpha) = 0.
// Throws UsageError unless 2n + 4 <= p.
bool fixed_point_converse(const FieldElement& alpha, u64 n);

}  // namespace ppgen
