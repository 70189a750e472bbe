#pragma once

// PGL_2(F_p) view of nested inversion forms: each form is, away from a small
// pole set, the Moebius map of a product of 2x2 matrices. Also the
// cryptographic complexity measures (linearity, weight, degree).

#include <array>
#include <optional>
#include <vector>

#include "ppgen/carlitz.hpp"

namespace ppgen {

// A 2x2 matrix [[a, b], [c, d]] modulo nonzero scalars, stored with the first
// nonzero entry (row-major) scaled to 1.
class ProjMatrix {
 public:
  // Throws DomainError when ad - bc = 0.
  ProjMatrix(PrimeModulus m, u32 a, u32 b, u32 c, u32 d);

  static ProjMatrix identity(PrimeModulus m) { return {m, 1, 0, 0, 1}; }
  // [[k, 1], [1, 0]]: x -> k + 1/x.
  static ProjMatrix inversion_layer(PrimeModulus m, u32 k) { return {m, k, 1, 1, 0}; }

  PrimeModulus modulus() const noexcept { return m_; }
  const std::array<u32, 4>& entries() const noexcept { return e_; }
  ProjMatrix inverse() const;

  friend ProjMatrix operator*(const ProjMatrix& x, const ProjMatrix& y);
  friend bool operator==(const ProjMatrix&, const ProjMatrix&) = default;

 private:
  PrimeModulus m_;
  std::array<u32, 4> e_;
};

// A point of P^1(F_p); nullopt is the point at infinity (a pole).
using ProjPoint = std::optional<u32>;

ProjPoint apply(const ProjMatrix& mat, ProjPoint x);
// (ax + b) / (cx + d), or nullopt at the pole.
std::optional<FieldElement> moebius_apply(const ProjMatrix& mat, const FieldElement& x);

// [[s_n, 1], [1, 0]] ... [[s_1, 1], [1, 0]] [[lead, s_0], [0, 1]].
ProjMatrix form_to_matrix(const CarlitzForm& form);

struct PoleSet {
  // Distinct finite poles rho_1, ..., in order of first appearance.
  std::vector<u32> poles;
  std::size_t n = 0;
};

// rho_m is the point the first m-1 layers send to 0, so that the m-th
// inversion sends it to infinity.
PoleSet pole_set(const CarlitzForm& form);

// Number of c with eval_form(form, c) equal to the Moebius image of c.
u32 agreement_count(const CarlitzForm& form);

struct Linearity {
  u32 value = 0;
  u32 argmax = 0;  // smallest a attaining the maximum
};

// max over a != 0 of #{c : f(c) = a c}. c = 0 counts for every a exactly
// when f(0) = 0.
Linearity linearity(const Permutation& f);
u32 a_linear_count(const Permutation& f, u32 a);

struct MeasureReport {
  u32 linearity = 0;
  u32 weight = 0;
  int degree = 0;
  // Lower bounds on the Carlitz rank: p - L, p - deg - 1, and
  // ceil(p / (weight - 2)) + 1 (absent when weight <= 2).
  i64 bound_from_linearity = 0;
  i64 bound_from_degree = 0;
  std::optional<i64> bound_from_weight;
};

MeasureReport measures(const Permutation& f);

struct AlphaLinearCheck {
  bool holds = true;
  std::optional<CarlitzForm> counterexample;
  u64 forms_checked = 0;
};

// Enumerates every form with lead alpha and at most 4 inversions; holds iff
// each one with at least p - 4 alpha-linear points is the map alpha x.
// Requires p >= 13 and alpha != 0.
AlphaLinearCheck check_alpha_linear_theorem(PrimeModulus m, u32 alpha, unsigned threads = 1);

}  // namespace ppgen
