#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "ppgen/ffield.hpp"

using namespace ppgen;

TEST_CASE("prime modulus validation") {
  CHECK_THROWS_AS(PrimeModulus(2), UsageError);
  CHECK_THROWS_AS(PrimeModulus(9), UsageError);
  CHECK_THROWS_AS(PrimeModulus(1), UsageError);
  CHECK_THROWS_AS(PrimeModulus(1ull << 31), UsageError);
  CHECK(PrimeModulus(2147483647).value() == 2147483647u);
  CHECK(PrimeModulus(3).value() == 3u);
}

TEST_CASE("primality and totient against brute force") {
  for (u64 n = 0; n < 2000; ++n) {
    bool brute = n >= 2;
    for (u64 d = 2; d * d <= n; ++d)
      if (n % d == 0) brute = false;
    CHECK(is_prime(n) == brute);
  }
  for (u64 n = 1; n < 300; ++n) CHECK(euler_phi(n) == oracle::phi(n));
  CHECK(distinct_prime_factors(360) == std::vector<u64>{2, 3, 5});
}

TEST_CASE("basic arithmetic") {
  const PrimeModulus m5(5), m7(7);
  CHECK((FieldElement(m5, 3) * FieldElement(m5, 4)).value() == 2);
  CHECK((FieldElement(m5, 4) + FieldElement(m5, 1)).value() == 0);
  CHECK((-FieldElement(m7, 0)).value() == 0);
  CHECK(FieldElement(m7, -1).value() == 6);
  CHECK((FieldElement(m7, 2) - FieldElement(m7, 5)).value() == 4);
  CHECK_THROWS_AS(FieldElement(m5, 1) + FieldElement(m7, 1), UsageError);
}

TEST_CASE("inverse") {
  const PrimeModulus m5(5);
  CHECK(FieldElement(m5, 2).inv().value() == 3);
  CHECK(FieldElement(m5, 1).inv().value() == 1);
  CHECK_THROWS_AS(FieldElement(m5, 0).inv(), DomainError);
  const PrimeModulus m97(97);
  for (i64 n = 1; n < 97; ++n) {
    const FieldElement x(m97, n);
    CHECK((x.inv() * x).value() == 1);
    CHECK(x.inv() == x.pow(95));
    CHECK(x.inv().value() == oracle::inv_search(n, 97));
  }
}

TEST_CASE("powers") {
  const PrimeModulus m5(5);
  CHECK(FieldElement(m5, 2).pow(3).value() == 3);
  CHECK(FieldElement(m5, 0).pow(0).value() == 1);
  CHECK(FieldElement(m5, 0).pow(3).value() == 0);
  for (u32 p : {5u, 13u, 97u}) {
    const PrimeModulus m(p);
    for (u32 x = 1; x < p; ++x) CHECK(m.pow(x, p - 1) == 1);
    CHECK(m.pow(0, p - 2) == 0);
    for (u32 x = 0; x < p; ++x)
      for (u64 e = 0; e < 40; e += 7) CHECK(m.pow(x, e) == oracle::pow_mod(x, e, p));
  }
}

TEST_CASE("field axioms on random triples") {
  std::mt19937_64 rng(11);
  for (u32 p : {5u, 97u, 1229u}) {
    const PrimeModulus m(p);
    for (int i = 0; i < 500; ++i) {
      const FieldElement a(m, rng() % p), b(m, rng() % p), c(m, rng() % p);
      CHECK((a + b) + c == a + (b + c));
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a + b == b + a);
      CHECK(a * b == b * a);
      CHECK(a - a == FieldElement(m, 0));
    }
  }
}

TEST_CASE("large modulus does not overflow") {
  const PrimeModulus m(2147483647);
  const FieldElement x(m, 2147483646);
  CHECK((x * x).value() == 1);
  CHECK((x + x).value() == 2147483645u);
  CHECK(x.pow(2147483646).value() == 1);
}

TEST_CASE("square roots and residues") {
  for (u32 p : {3u, 5u, 7u, 13u, 17u, 97u, 1229u, 65537u}) {
    const PrimeModulus m(p);
    std::vector<bool> square(p, false);
    for (u64 x = 0; x < p; ++x) square[x * x % p] = true;
    for (u32 a = 0; a < std::min<u32>(p, 2000); ++a) {
      CHECK(m.is_residue(a) == (a != 0 && square[a]));  // 0 is not a residue
      const auto r = m.sqrt(a);
      CHECK(r.has_value() == square[a]);
      if (r) CHECK(m.mul(*r, *r) == a);
    }
    const u32 d = m.first_non_residue();
    CHECK_FALSE(m.is_residue(d));
    for (u32 k = 2; k < d; ++k) CHECK(m.is_residue(k));
  }
}

TEST_CASE("multiplicative order") {
  const PrimeModulus m(13);
  CHECK(multiplicative_order(FieldElement(m, 1)) == 1);
  CHECK(multiplicative_order(FieldElement(m, 12)) == 2);
  CHECK(multiplicative_order(FieldElement(m, 2)) == 12);
  for (u32 x = 1; x < 13; ++x) {
    u64 k = 1;
    while (oracle::pow_mod(x, k, 13) != 1) ++k;
    CHECK(multiplicative_order(FieldElement(m, x)) == k);
  }
  CHECK_THROWS_AS(multiplicative_order(FieldElement(m, 0)), DomainError);
}

TEST_CASE("quadratic extension") {
  const PrimeModulus m7(7);
  const QuadExtElement z(m7, 2, 1, 3);
  CHECK((z * z.conjugate()).u() == 1);
  CHECK((z * z.conjugate()).v() == 0);
  CHECK(z.norm() == 1);
  CHECK_THROWS_AS(QuadExtElement(m7, 1, 1, 2), DomainError);  // 2 = 3^2 is a square
  CHECK(quad_order(QuadExtElement::from_base(m7, 1, 3)) == 1);
  CHECK_THROWS_AS(quad_order(QuadExtElement(m7, 0, 0, 3)), DomainError);
  const QuadExtElement sq = QuadExtElement(m7, 0, 1, 3) * QuadExtElement(m7, 0, 1, 3);
  CHECK(sq.u() == 3);
  CHECK(sq.v() == 0);

  const PrimeModulus m11(11);
  const u32 d = m11.first_non_residue();
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const QuadExtElement x(m11, rng() % 11, 1 + rng() % 10, d);
    const u64 ord = quad_order(x);
    CHECK(120 % ord == 0);
    CHECK(x.pow(ord).is_one());
    for (u64 k = 1; k < ord; ++k) CHECK_FALSE(x.pow(k).is_one());
    for (u64 k : {2u, 3u, 4u, 6u, 10u, 15u}) CHECK(quad_order(x.pow(k)) == ord / std::gcd(ord, k));
    CHECK((x * x.inv()).is_one());
  }
}

TEST_CASE("quadratic extension order for a large prime") {
  const PrimeModulus m(1000003);
  const QuadExtElement x = QuadExtElement::canonical(m, 5, 7);
  const u64 ord = quad_order(x);
  const u64 group = u64(1000003) * 1000003 - 1;
  CHECK(group % ord == 0);
  CHECK(x.pow(ord).is_one());
}
