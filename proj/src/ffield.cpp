#include "ppgen/ffield.hpp"

#include <algorithm>
#include <string>

namespace ppgen {

bool is_prime(u64 n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (u64 d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<u64> distinct_prime_factors(u64 n) {
  std::vector<u64> out;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

u64 euler_phi(u64 n) {
  if (n == 0) return 0;
  u64 result = n;
  for (u64 q : distinct_prime_factors(n)) result = result / q * (q - 1);
  return result;
}

PrimeModulus::PrimeModulus(u64 p) : p_(0) {
  if (p < 3 || p >= (u64{1} << 31) || !is_prime(p)) {
    throw UsageError("modulus must be an odd prime below 2^31, got " + std::to_string(p));
  }
  p_ = static_cast<u32>(p);
}

u32 PrimeModulus::pow(u32 base, u64 e) const noexcept {
  u64 result = 1 % p_;
  u64 b = base % p_;
  while (e != 0) {
    if (e & 1) result = result * b % p_;
    b = b * b % p_;
    e >>= 1;
  }
  return static_cast<u32>(result);
}

u32 PrimeModulus::inv(u32 a) const {
  if (a % p_ == 0) throw DomainError("zero has no multiplicative inverse");
  return pow(a, p_ - 2);
}

bool PrimeModulus::is_residue(u32 a) const noexcept {
  a %= p_;
  return a != 0 && pow(a, (p_ - 1) / 2) == 1;
}

std::optional<u32> PrimeModulus::sqrt(u32 a) const {
  a %= p_;
  if (a == 0) return 0u;
  if (!is_residue(a)) return std::nullopt;
  // p - 1 = q * 2^s
  u64 q = p_ - 1;
  unsigned s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  const u32 z = first_non_residue();
  u32 c = pow(z, q);
  u32 x = pow(a, (q + 1) / 2);
  u32 t = pow(a, q);
  unsigned m = s;
  while (t != 1) {
    unsigned i = 0;
    u32 t2 = t;
    while (t2 != 1) {
      t2 = mul(t2, t2);
      ++i;
    }
    u32 b = c;
    for (unsigned j = 0; j + i + 1 < m; ++j) b = mul(b, b);
    x = mul(x, b);
    c = mul(b, b);
    t = mul(t, c);
    m = i;
  }
  return x;
}

u32 PrimeModulus::first_non_residue() const {
  for (u32 d = 2; d < p_; ++d) {
    if (!is_residue(d)) return d;
  }
  throw DomainError("no quadratic non-residue");  // unreachable for odd p
}

namespace {

// Order of x in a cyclic group of order n, given pow.
template <class Pow>
u64 order_dividing(u64 n, const std::vector<u64>& primes, Pow&& pow_is_one) {
  u64 order = n;
  for (u64 q : primes) {
    while (order % q == 0 && pow_is_one(order / q)) order /= q;
  }
  return order;
}

}  // namespace

u64 multiplicative_order(const FieldElement& x) {
  if (x.is_zero()) throw DomainError("zero has no multiplicative order");
  const PrimeModulus m = x.modulus();
  const u64 n = m.value() - 1;
  return order_dividing(n, distinct_prime_factors(n), [&](u64 e) { return m.pow(x.value(), e) == 1; });
}

QuadExtElement::QuadExtElement(PrimeModulus m, u32 u, u32 v, u32 d)
    : m_(m), u_(u % m.value()), v_(v % m.value()), d_(d % m.value()) {
  if (d_ == 0 || m.is_residue(d_)) {
    throw DomainError("discriminant " + std::to_string(d) + " is not a quadratic non-residue mod " +
                      std::to_string(m.value()));
  }
}

QuadExtElement QuadExtElement::canonical(PrimeModulus m, u32 u, u32 v) {
  return {m, u, v, m.first_non_residue()};
}

void QuadExtElement::check_same(const QuadExtElement& y) const {
  if (m_ != y.m_ || d_ != y.d_) throw UsageError("quadratic extension elements from different fields");
}

u32 QuadExtElement::norm() const noexcept {
  return m_.sub(m_.mul(u_, u_), m_.mul(d_, m_.mul(v_, v_)));
}

QuadExtElement operator+(const QuadExtElement& x, const QuadExtElement& y) {
  x.check_same(y);
  return {x.m_, x.m_.add(x.u_, y.u_), x.m_.add(x.v_, y.v_), x.d_, QuadExtElement::Raw{}};
}

QuadExtElement operator-(const QuadExtElement& x, const QuadExtElement& y) {
  x.check_same(y);
  return {x.m_, x.m_.sub(x.u_, y.u_), x.m_.sub(x.v_, y.v_), x.d_, QuadExtElement::Raw{}};
}

QuadExtElement operator*(const QuadExtElement& x, const QuadExtElement& y) {
  x.check_same(y);
  const PrimeModulus& m = x.m_;
  const u32 u = m.add(m.mul(x.u_, y.u_), m.mul(x.d_, m.mul(x.v_, y.v_)));
  const u32 v = m.add(m.mul(x.u_, y.v_), m.mul(x.v_, y.u_));
  return {m, u, v, x.d_, QuadExtElement::Raw{}};
}

QuadExtElement quad_mul(const QuadExtElement& x, const QuadExtElement& y) { return x * y; }

QuadExtElement QuadExtElement::pow(u64 e) const {
  QuadExtElement result{m_, 1, 0, d_, Raw{}};
  QuadExtElement b = *this;
  while (e != 0) {
    if (e & 1) result = result * b;
    b = b * b;
    e >>= 1;
  }
  return result;
}

QuadExtElement QuadExtElement::inv() const {
  if (is_zero()) throw DomainError("zero has no multiplicative inverse");
  // (u + v sqrt D)^-1 = (u - v sqrt D) / N
  const u32 n_inv = m_.inv(norm());
  return {m_, m_.mul(u_, n_inv), m_.mul(m_.neg(v_), n_inv), d_, Raw{}};
}

u64 quad_order(const QuadExtElement& x) {
  if (x.is_zero()) throw DomainError("zero has no multiplicative order");
  const u64 p = x.modulus().value();
  // p^2 - 1 = (p - 1)(p + 1); factoring the halves keeps trial division short.
  std::vector<u64> primes = distinct_prime_factors(p - 1);
  for (u64 q : distinct_prime_factors(p + 1)) {
    if (std::find(primes.begin(), primes.end(), q) == primes.end()) primes.push_back(q);
  }
  return order_dividing(p * p - 1, primes, [&](u64 e) { return x.pow(e).is_one(); });
}

}  // namespace ppgen
