#include "ppgen/fibonacci.hpp"

namespace ppgen {

Mat2 mat2_mul(PrimeModulus m, const Mat2& x, const Mat2& y) {
  return {m.add(m.mul(x[0], y[0]), m.mul(x[1], y[2])), m.add(m.mul(x[0], y[1]), m.mul(x[1], y[3])),
          m.add(m.mul(x[2], y[0]), m.mul(x[3], y[2])), m.add(m.mul(x[2], y[1]), m.mul(x[3], y[3]))};
}

Mat2 fib_matrix_power(u64 n, const FieldElement& alpha) {
  const PrimeModulus m = alpha.modulus();
  Mat2 result{1, 0, 0, 1};
  Mat2 base{alpha.value(), 1, 1, 0};
  while (n != 0) {
    if (n & 1) result = mat2_mul(m, result, base);
    base = mat2_mul(m, base, base);
    n >>= 1;
  }
  return result;
}

FieldElement fib_eval(u64 n, const FieldElement& alpha) {
  const PrimeModulus m = alpha.modulus();
  u32 prev = 0, cur = 1;  // F_0, F_1
  if (n == 0) return {m, 0};
  for (u64 k = 1; k < n; ++k) {
    const u32 next = m.add(m.mul(alpha.value(), cur), prev);
    prev = cur;
    cur = next;
  }
  return {m, cur};
}

std::vector<u32> fib_sequence(std::size_t count, const FieldElement& alpha) {
  const PrimeModulus m = alpha.modulus();
  std::vector<u32> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    if (k < 2) {
      out.push_back(static_cast<u32>(k));
    } else {
      out.push_back(m.add(m.mul(alpha.value(), out[k - 1]), out[k - 2]));
    }
  }
  return out;
}

bool is_ramified(const FieldElement& alpha) {
  const PrimeModulus m = alpha.modulus();
  return m.add(m.mul(alpha.value(), alpha.value()), 4 % m.value()) == 0;
}

std::optional<u64> min_zero_index(const FieldElement& alpha, u64 bound) {
  const PrimeModulus m = alpha.modulus();
  if (bound == 0) bound = u64{m.value()} * m.value() - 1;
  u32 prev = 0, cur = 1;
  for (u64 n = 1; n <= bound; ++n) {
    if (cur == 0) return n;
    const u32 next = m.add(m.mul(alpha.value(), cur), prev);
    prev = cur;
    cur = next;
  }
  return std::nullopt;
}

u64 ratio_order(const FieldElement& alpha) {
  const PrimeModulus m = alpha.modulus();
  if (is_ramified(alpha)) throw DomainError("alpha^2 + 4 = 0: the sequence is ramified at p");
  const u32 disc = m.add(m.mul(alpha.value(), alpha.value()), 4 % m.value());
  const u32 half = m.inv(2);
  const u32 minus_alpha = m.neg(alpha.value());
  if (const auto root = m.sqrt(disc)) {
    const u32 z_plus = m.mul(m.add(minus_alpha, *root), half);
    const u32 z_minus = m.mul(m.sub(minus_alpha, *root), half);
    return multiplicative_order(FieldElement(m, m.mul(z_plus, m.inv(z_minus))));
  }
  // F_p(sqrt(disc)) with sqrt(disc) = (0, 1).
  const QuadExtElement z_plus(m, m.mul(minus_alpha, half), half, disc);
  const QuadExtElement z_minus(m, m.mul(minus_alpha, half), m.neg(half), disc);
  return quad_order(z_plus / z_minus);
}

Permutation inversion_shift_perm(const FieldElement& alpha) {
  const PrimeModulus m = alpha.modulus();
  std::vector<u32> images(m.value());
  for (u32 x = 0; x < m.value(); ++x) images[x] = m.add(m.inv_or_zero(x), alpha.value());
  return Permutation::trusted(m, std::move(images));
}

std::vector<u32> pole_orbit(const FieldElement& alpha, std::size_t count) {
  const PrimeModulus m = alpha.modulus();
  const std::vector<u32> f = fib_sequence(count, alpha);
  std::vector<u32> out;
  for (std::size_t i = 1; i < count; ++i) out.push_back(m.neg(m.mul(f[i - 1], m.inv(f[i]))));
  return out;
}

FibCycleReport iterate_check(const FieldElement& alpha) {
  const PrimeModulus m = alpha.modulus();
  if (alpha.is_zero()) throw UsageError("alpha must be nonzero");
  const u64 p = m.value();
  FibCycleReport report;
  report.alpha = alpha.value();
  report.prime = m.value();
  report.ramified = is_ramified(alpha);
  report.n_zero = min_zero_index(alpha);
  if (!report.n_zero) return report;

  const u64 n = *report.n_zero;
  report.hypothesis_met = n < p;
  report.divides_p2_minus_1 = (p * p - 1) % n == 0;
  report.successor_identity = fib_eval(n + 1, alpha) == fib_eval(n - 1, alpha);

  const Permutation iterate = power(inversion_shift_perm(alpha), n);
  report.cycle = cycle_decomposition(iterate);

  // x_1 ... x_{n-1} are well defined because F_1 ... F_{n-1} are nonzero.
  const std::vector<u32> points = pole_orbit(alpha, n);
  std::vector<u32> cycle(points.rbegin(), points.rend());
  try {
    const Permutation predicted = cycle.size() >= 2 ? from_cycles(m, {cycle}) : Permutation::identity(m);
    report.predicted = cycle_decomposition(predicted);
    report.cycle_matches = predicted == iterate;
  } catch (const std::invalid_argument&) {
    report.cycle_matches = false;  // repeated points: no single cycle
  }
  return report;
}

bool fixed_point_converse(const FieldElement& alpha, u64 n) {
  const PrimeModulus m = alpha.modulus();
  if (2 * n + 4 > m.value()) throw UsageError("the fixed-point converse needs 2n + 4 <= p");
  const Permutation iterate = power(inversion_shift_perm(alpha), n);
  u64 fixed = 0;
  for (u32 x = 0; x < m.value(); ++x) fixed += iterate(x) == x;
  if (fixed < n + 4) return true;
  return fib_eval(n, alpha).is_zero();
}

}  // namespace ppgen
