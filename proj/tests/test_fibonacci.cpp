#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "ppgen/carlitz.hpp"
#include "ppgen/fibonacci.hpp"
#include "ppgen/moebius.hpp"

using namespace ppgen;

namespace {

std::vector<u32> primes_between(u32 lo, u32 hi) {
  std::vector<u32> out;
  for (u32 p = lo; p <= hi; ++p)
    if (is_prime(p)) out.push_back(p);
  return out;
}

CarlitzForm iterate_form(const FieldElement& alpha, u64 n) {
  std::vector<u32> shifts(n + 1, alpha.value());
  shifts[0] = 0;
  return CarlitzForm(alpha.modulus(), 1, shifts);
}

}  // namespace

TEST_CASE("Fibonacci values") {
  const PrimeModulus m11(11), m7(7);
  for (u32 a = 0; a < 7; ++a) {
    CHECK(fib_eval(0, FieldElement(m7, a)).value() == 0);
    CHECK(fib_eval(1, FieldElement(m7, a)).value() == 1);
    CHECK(fib_eval(2, FieldElement(m7, a)).value() == a);
  }
  CHECK(fib_eval(5, FieldElement(m11, 1)).value() == 5);
  const auto seq = fib_sequence(40, FieldElement(m11, 3));
  const auto ref = oracle::fibonacci(40, 3, 11);
  CHECK(std::equal(seq.begin(), seq.end(), ref.begin()));
  for (u64 n = 0; n < 40; ++n) CHECK(fib_eval(n, FieldElement(m11, 3)).value() == ref[n]);
}

TEST_CASE("matrix powers hold Fibonacci values") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const u32 p = primes_between(5, 200)[rng() % 44];
    const PrimeModulus m(p);
    const FieldElement a(m, rng() % p);
    const auto f = oracle::fibonacci(202, a.value(), p);
    for (u64 n = 1; n <= 200; ++n) {
      const Mat2 mat = fib_matrix_power(n, a);
      CHECK(mat == Mat2{static_cast<u32>(f[n + 1]), static_cast<u32>(f[n]), static_cast<u32>(f[n]),
                        static_cast<u32>(f[n - 1])});
    }
    CHECK(fib_matrix_power(0, a) == Mat2{1, 0, 0, 1});
    CHECK(mat2_mul(m, fib_matrix_power(7, a), fib_matrix_power(9, a)) == fib_matrix_power(16, a));
  }
}

TEST_CASE("addition law") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    const u32 p = primes_between(3, 1000)[rng() % 167];
    const PrimeModulus m(p);
    const FieldElement a(m, rng() % p);
    const u64 n = rng() % 500, k = 1 + rng() % 500;
    CHECK(fib_eval(n + k, a) == fib_eval(n + 1, a) * fib_eval(k, a) + fib_eval(n, a) * fib_eval(k - 1, a));
  }
}

TEST_CASE("first zero examples") {
  CHECK(min_zero_index(FieldElement(PrimeModulus(11), 1)) == 10u);
  CHECK(min_zero_index(FieldElement(PrimeModulus(5), 1)) == 5u);
  CHECK_FALSE(min_zero_index(FieldElement(PrimeModulus(11), 1), 9).has_value());
  CHECK(is_ramified(FieldElement(PrimeModulus(5), 1)));
  CHECK_FALSE(is_ramified(FieldElement(PrimeModulus(11), 1)));
  CHECK(ratio_order(FieldElement(PrimeModulus(11), 1)) == 10);
  CHECK_THROWS_AS(ratio_order(FieldElement(PrimeModulus(5), 1)), DomainError);
}

TEST_CASE("first zero equals the ratio order and divides p^2 - 1") {
  for (u32 p : primes_between(3, 60)) {
    const PrimeModulus m(p);
    for (u32 a = 1; a < p; ++a) {
      const FieldElement alpha(m, a);
      const auto n = min_zero_index(alpha);
      REQUIRE(n.has_value());
      const auto f = oracle::fibonacci(*n + 1, a, p);
      CHECK(f[*n] == 0);
      for (u64 k = 1; k < *n; ++k) CHECK(f[k] != 0);
      if (is_ramified(alpha)) {
        CHECK(*n == p);
        continue;
      }
      CHECK(ratio_order(alpha) == *n);
      CHECK((u64(p) * p - 1) % *n == 0);
    }
  }
}

TEST_CASE("shifted first-zero relation") {
  for (u32 p : {7u, 11u}) {
    const PrimeModulus m(p);
    for (u32 a = 1; a < p; ++a) {
      const FieldElement alpha(m, a);
      if (is_ramified(alpha)) continue;
      const auto f = oracle::fibonacci(400, a, p);
      for (u64 mm : {1u, 2u, 3u}) {
        u64 n = mm + 1;
        while ((f[n] * f[mm - 1]) % p != (f[n - 1] * f[mm]) % p) ++n;
        CHECK(n - mm == ratio_order(alpha));
      }
    }
  }
}

TEST_CASE("cycle of the iterate at alpha = 1, p = 11") {
  const FieldElement alpha(PrimeModulus(11), 1);
  const FibCycleReport r = iterate_check(alpha);
  CHECK(r.n_zero == 10u);
  CHECK(r.hypothesis_met);
  CHECK(r.divides_p2_minus_1);
  CHECK(r.successor_identity);
  CHECK(r.cycle_matches);
  CHECK(to_cycle_string(r.cycle) == "(0 1 2 7 9 6 3 5 10)");
  CHECK(r.cycle == r.predicted);
  const Permutation brute = power(poly_perm(9, 1, PrimeModulus(11)), 10);
  CHECK(cycle_decomposition(brute) == r.cycle);
}

TEST_CASE("reciprocal ratios do not describe the iterate") {
  // The points -F_{i-1}/F_{i-2} are the reciprocals of the true cycle points.
  const PrimeModulus m(11);
  const FieldElement alpha(m, 1);
  const auto f = oracle::fibonacci(11, 1, 11);
  std::vector<u32> cycle;
  for (u64 i = 9; i >= 3; --i) cycle.push_back(static_cast<u32>((11 - f[i - 1] * oracle::inv_search(f[i - 2], 11) % 11) % 11));
  cycle.push_back(0);
  bool distinct = true;
  for (std::size_t i = 0; i < cycle.size(); ++i)
    for (std::size_t j = i + 1; j < cycle.size(); ++j) distinct &= cycle[i] != cycle[j];
  if (distinct) CHECK(from_cycles(m, {cycle}) != power(inversion_shift_perm(alpha), 10));
}

TEST_CASE("iterate cycles across primes") {
  for (u32 p : primes_between(3, 100)) {
    const PrimeModulus m(p);
    for (u32 a = 1; a < p; ++a) {
      const FieldElement alpha(m, a);
      const FibCycleReport r = iterate_check(alpha);
      CHECK(r.ramified == is_ramified(alpha));
      REQUIRE(r.n_zero.has_value());
      CHECK(r.successor_identity);
      CHECK(r.hypothesis_met == (*r.n_zero < p));
      if (r.hypothesis_met) {
        CHECK(r.cycle_matches);
        CHECK(r.divides_p2_minus_1);
      }
    }
  }
  const FibCycleReport ramified = iterate_check(FieldElement(PrimeModulus(5), 1));
  CHECK(ramified.ramified);
  CHECK_FALSE(ramified.hypothesis_met);
  CHECK(power(inversion_shift_perm(FieldElement(PrimeModulus(7), 3)), 0).is_identity());
  CHECK_THROWS_AS(iterate_check(FieldElement(PrimeModulus(7), 0)), UsageError);
}

TEST_CASE("pole orbit reaches zero") {
  for (u32 p : {7u, 11u, 13u, 29u}) {
    const PrimeModulus m(p);
    for (u32 a = 1; a < p; ++a) {
      const FieldElement alpha(m, a);
      const u64 n = *min_zero_index(alpha);
      const auto pts = pole_orbit(alpha, n);
      const Permutation f = inversion_shift_perm(alpha);
      CHECK(pts.size() == n - 1);
      for (u64 i = 1; i < n; ++i) CHECK(power(f, i - 1)(pts[i - 1]) == 0);
    }
  }
}

TEST_CASE("iterate is the identity off its poles exactly at zeros") {
  for (u32 p : {11u, 13u, 17u, 19u}) {
    const PrimeModulus m(p);
    for (u32 a = 1; a < p; ++a) {
      const FieldElement alpha(m, a);
      const Permutation f = inversion_shift_perm(alpha);
      for (u64 n = 1; n + 3 <= p; ++n) {
        const Permutation it = power(f, n);
        const PoleSet poles = pole_set(iterate_form(alpha, n));
        CHECK(form_to_perm(iterate_form(alpha, n)) == it);
        bool identity_off_poles = true;
        for (u32 x = 0; x < p; ++x) {
          if (std::find(poles.poles.begin(), poles.poles.end(), x) != poles.poles.end()) continue;
          identity_off_poles &= it(x) == x;
        }
        CHECK(identity_off_poles == fib_eval(n, alpha).is_zero());
      }
    }
  }
}

TEST_CASE("fixed-point converse") {
  CHECK_THROWS_AS(fixed_point_converse(FieldElement(PrimeModulus(11), 1), 4), UsageError);
  for (u32 p : {11u, 13u, 23u, 29u}) {
    const PrimeModulus m(p);
    for (u32 a = 1; a < p; ++a)
      for (u64 n = 1; 2 * n + 4 <= p; ++n) CHECK(fixed_point_converse(FieldElement(m, a), n));
  }
}
