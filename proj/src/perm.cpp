#include "ppgen/perm.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace ppgen {

Permutation::Permutation(PrimeModulus m, std::vector<u32> images) : m_(m), images_(std::move(images)) {
  const u32 p = m.value();
  if (images_.size() != p) {
    throw NotAPermutation("image array has length " + std::to_string(images_.size()) + ", expected " +
                          std::to_string(p));
  }
  std::vector<bool> seen(p, false);
  for (u32 y : images_) {
    if (y >= p || seen[y]) throw NotAPermutation("image array is not a bijection of F_" + std::to_string(p));
    seen[y] = true;
  }
}

Permutation Permutation::identity(PrimeModulus m) {
  std::vector<u32> images(m.value());
  std::iota(images.begin(), images.end(), 0u);
  return trusted(m, std::move(images));
}

bool Permutation::is_identity() const noexcept {
  for (u32 x = 0; x < images_.size(); ++x) {
    if (images_[x] != x) return false;
  }
  return true;
}

Permutation poly_perm(u64 d, u32 c, PrimeModulus m) {
  const u64 p = m.value();
  const bool inversion = d == p - 2;
  if (!inversion && (d < 1 || d >= p - 1 || std::gcd(d, p - 1) != 1)) {
    throw NotAPermutation("x^" + std::to_string(d) + " + c does not permute F_" + std::to_string(p) +
                          " (need 1 <= d < p-1 and gcd(d, p-1) = 1)");
  }
  std::vector<u32> images(p);
  for (u32 x = 0; x < p; ++x) images[x] = m.add(m.pow(x, d), c % m.value());
  return Permutation::trusted(m, std::move(images));
}

Permutation poly_perm(u64 d, const FieldElement& c) { return poly_perm(d, c.value(), c.modulus()); }

Permutation affine_perm(const FieldElement& a, const FieldElement& b) {
  if (a.modulus() != b.modulus()) throw UsageError("affine coefficients belong to different moduli");
  if (a.is_zero()) throw NotAPermutation("ax + b with a = 0 is constant");
  const PrimeModulus m = a.modulus();
  std::vector<u32> images(m.value());
  for (u32 x = 0; x < m.value(); ++x) images[x] = m.add(m.mul(a.value(), x), b.value());
  return Permutation::trusted(m, std::move(images));
}

Permutation shift_sigma(PrimeModulus m, u32 k) {
  std::vector<u32> images(m.value());
  k %= m.value();
  for (u32 x = 0; x < m.value(); ++x) images[x] = m.add(x, k);
  return Permutation::trusted(m, std::move(images));
}

Permutation inversion_delta(PrimeModulus m) {
  std::vector<u32> images(m.value());
  for (u32 x = 0; x < m.value(); ++x) images[x] = m.inv_or_zero(x);
  return Permutation::trusted(m, std::move(images));
}

Permutation negation_perm(PrimeModulus m) {
  std::vector<u32> images(m.value());
  for (u32 x = 0; x < m.value(); ++x) images[x] = m.neg(x);
  return Permutation::trusted(m, std::move(images));
}

Permutation compose(const Permutation& f, const Permutation& g) {
  if (f.modulus() != g.modulus()) throw UsageError("cannot compose permutations of different degrees");
  std::vector<u32> images(f.degree());
  for (u32 x = 0; x < f.degree(); ++x) images[x] = f(g(x));
  return Permutation::trusted(f.modulus(), std::move(images));
}

Permutation inverse(const Permutation& f) {
  std::vector<u32> images(f.degree());
  for (u32 x = 0; x < f.degree(); ++x) images[f(x)] = x;
  return Permutation::trusted(f.modulus(), std::move(images));
}

Permutation power(const Permutation& f, u64 n) {
  Permutation result = Permutation::identity(f.modulus());
  Permutation base = f;
  while (n != 0) {
    if (n & 1) result = compose(base, result);
    base = compose(base, base);
    n >>= 1;
  }
  return result;
}

Permutation apply_in_order(PrimeModulus m, std::span<const Permutation> maps) {
  Permutation result = Permutation::identity(m);
  for (const Permutation& f : maps) result = compose(f, result);
  return result;
}

CycleDecomposition cycle_decomposition(const Permutation& f) {
  CycleDecomposition out;
  std::vector<bool> seen(f.degree(), false);
  // Scanning starts in increasing order, so each cycle begins at its minimum
  // and cycles come out sorted by first element.
  for (u32 start = 0; start < f.degree(); ++start) {
    if (seen[start]) continue;
    if (f(start) == start) {
      seen[start] = true;
      out.fixed_points.push_back(start);
      continue;
    }
    std::vector<u32> cycle;
    for (u32 x = start; !seen[x]; x = f(x)) {
      seen[x] = true;
      cycle.push_back(x);
    }
    out.cycles.push_back(std::move(cycle));
  }
  return out;
}

Permutation from_cycles(PrimeModulus m, const std::vector<std::vector<u32>>& cycles) {
  const u32 p = m.value();
  std::vector<u32> images(p);
  std::iota(images.begin(), images.end(), 0u);
  std::vector<bool> used(p, false);
  for (const auto& cycle : cycles) {
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      const u32 x = cycle[i];
      if (x >= p) throw UsageError("cycle point " + std::to_string(x) + " is outside F_" + std::to_string(p));
      if (used[x]) throw UsageError("point " + std::to_string(x) + " appears in more than one cycle position");
      used[x] = true;
      images[x] = cycle[(i + 1) % cycle.size()];
    }
  }
  return Permutation(m, std::move(images));
}

Parity sign(const Permutation& f) {
  const CycleDecomposition c = cycle_decomposition(f);
  const std::size_t cycle_count = c.cycles.size() + c.fixed_points.size();
  return (f.degree() - cycle_count) % 2 == 0 ? Parity::Even : Parity::Odd;
}

u64 element_order(const Permutation& f) {
  u64 order = 1;
  for (const auto& cycle : cycle_decomposition(f).cycles) {
    const u64 len = cycle.size();
    const u64 g = std::gcd(order, len);
    if (order / g > UINT64_MAX / len) throw DomainError("element order exceeds 64 bits");
    order = order / g * len;
  }
  return order;
}

std::string to_cycle_string(const CycleDecomposition& c) {
  if (c.cycles.empty()) return "()";
  std::string out;
  for (const auto& cycle : c.cycles) {
    out += '(';
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      if (i != 0) out += ' ';
      out += std::to_string(cycle[i]);
    }
    out += ')';
  }
  return out;
}

std::string to_cycle_string(const Permutation& f) { return to_cycle_string(cycle_decomposition(f)); }

Permutation parse_cycles(std::string_view text, PrimeModulus m) {
  std::vector<std::vector<u32>> cycles;
  std::size_t i = 0;
  auto skip_space = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto fail = [&](const std::string& why) -> void {
    throw UsageError("bad cycle notation \"" + std::string(text) + "\": " + why);
  };
  skip_space();
  while (i < text.size()) {
    if (text[i] != '(') fail("expected '('");
    ++i;
    std::vector<u32> cycle;
    while (true) {
      skip_space();
      if (i >= text.size()) fail("unterminated cycle");
      if (text[i] == ')') {
        ++i;
        break;
      }
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) fail("expected a point");
      u64 value = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        value = value * 10 + static_cast<u64>(text[i] - '0');
        if (value >= m.value()) fail("point outside F_" + std::to_string(m.value()));
        ++i;
      }
      cycle.push_back(static_cast<u32>(value));
    }
    if (cycle.size() >= 2) cycles.push_back(std::move(cycle));
    skip_space();
  }
  return from_cycles(m, cycles);
}

PolynomialRep::PolynomialRep(PrimeModulus m, std::vector<u32> coefficients) : m_(m), coeffs_(std::move(coefficients)) {
  if (coeffs_.size() != m.value()) throw UsageError("polynomial must carry exactly p coefficients");
}

int PolynomialRep::degree() const noexcept {
  for (std::size_t k = coeffs_.size(); k-- > 0;) {
    if (coeffs_[k] != 0) return static_cast<int>(k);
  }
  return -1;
}

u32 PolynomialRep::weight() const noexcept {
  return static_cast<u32>(std::count_if(coeffs_.begin(), coeffs_.end(), [](u32 c) { return c != 0; }));
}

u32 PolynomialRep::evaluate(u32 x) const noexcept {
  u32 acc = 0;
  for (std::size_t k = coeffs_.size(); k-- > 0;) acc = m_.add(m_.mul(acc, x), coeffs_[k]);
  return acc;
}

PolynomialRep to_polynomial(const Permutation& f) {
  // Lagrange interpolation over all of F_p. The basis polynomial for the node a
  // is 1 - (x - a)^(p-1) = 1 - sum_k a^(p-1-k) x^k, since C(p-1, k) = (-1)^k.
  // Hence c_0 = f(0) and c_k = -sum_a f(a) a^(p-1-k) for k >= 1.
  const PrimeModulus m = f.modulus();
  const u32 p = m.value();
  std::vector<u32> coeffs(p, 0);
  coeffs[0] = f(0);
  // power[a] holds a^(p-1-k), walking down from a^(p-2) at k = 1.
  std::vector<u32> power(p, 0), a_inv(p, 0);
  for (u32 a = 1; a < p; ++a) {
    a_inv[a] = m.inv(a);
    power[a] = a_inv[a];
  }
  for (u32 k = 1; k < p; ++k) {
    u64 sum = 0;
    for (u32 a = 1; a < p; ++a) {
      sum += m.mul(f(a), power[a]);
      power[a] = m.mul(power[a], a_inv[a]);
    }
    if (k == p - 1) sum += f(0);  // 0^0 = 1
    coeffs[k] = m.neg(static_cast<u32>(sum % p));
  }
  return PolynomialRep(m, std::move(coeffs));
}

}  // namespace ppgen
