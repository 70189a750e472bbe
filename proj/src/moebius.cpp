#include "ppgen/moebius.hpp"

#include <algorithm>
#include <thread>

namespace ppgen {

ProjMatrix::ProjMatrix(PrimeModulus m, u32 a, u32 b, u32 c, u32 d)
    : m_(m), e_{a % m.value(), b % m.value(), c % m.value(), d % m.value()} {
  if (m.sub(m.mul(e_[0], e_[3]), m.mul(e_[1], e_[2])) == 0) throw DomainError("singular matrix is not in PGL_2");
  const u32 lead = *std::find_if(e_.begin(), e_.end(), [](u32 v) { return v != 0; });
  const u32 scale = m.inv(lead);
  for (u32& v : e_) v = m.mul(v, scale);
}

ProjMatrix ProjMatrix::inverse() const {
  // adjugate; scalars do not matter
  return {m_, e_[3], m_.neg(e_[1]), m_.neg(e_[2]), e_[0]};
}

ProjMatrix operator*(const ProjMatrix& x, const ProjMatrix& y) {
  if (x.m_ != y.m_) throw UsageError("matrices over different fields");
  const PrimeModulus& m = x.m_;
  const auto& a = x.e_;
  const auto& b = y.e_;
  return {m, m.add(m.mul(a[0], b[0]), m.mul(a[1], b[2])), m.add(m.mul(a[0], b[1]), m.mul(a[1], b[3])),
          m.add(m.mul(a[2], b[0]), m.mul(a[3], b[2])), m.add(m.mul(a[2], b[1]), m.mul(a[3], b[3]))};
}

ProjPoint apply(const ProjMatrix& mat, ProjPoint x) {
  const PrimeModulus m = mat.modulus();
  const auto& e = mat.entries();
  u32 num, den;
  if (x) {
    num = m.add(m.mul(e[0], *x), e[1]);
    den = m.add(m.mul(e[2], *x), e[3]);
  } else {
    num = e[0];
    den = e[2];
  }
  if (den == 0) return std::nullopt;
  return m.mul(num, m.inv(den));
}

std::optional<FieldElement> moebius_apply(const ProjMatrix& mat, const FieldElement& x) {
  if (mat.modulus() != x.modulus()) throw UsageError("point and matrix belong to different fields");
  const ProjPoint y = apply(mat, x.value());
  if (!y) return std::nullopt;
  return FieldElement(mat.modulus(), *y);
}

ProjMatrix form_to_matrix(const CarlitzForm& form) {
  const PrimeModulus m = form.modulus();
  ProjMatrix mat(m, form.lead(), form.inner_shift(), 0, 1);
  for (std::size_t k = 1; k < form.shifts().size(); ++k) mat = ProjMatrix::inversion_layer(m, form.shifts()[k]) * mat;
  return mat;
}

PoleSet pole_set(const CarlitzForm& form) {
  const PrimeModulus m = form.modulus();
  PoleSet out;
  out.n = form.inversions();
  ProjMatrix mat(m, form.lead(), form.inner_shift(), 0, 1);
  for (std::size_t k = 1; k < form.shifts().size(); ++k) {
    const ProjPoint rho = apply(mat.inverse(), 0u);
    if (rho && std::find(out.poles.begin(), out.poles.end(), *rho) == out.poles.end()) out.poles.push_back(*rho);
    mat = ProjMatrix::inversion_layer(m, form.shifts()[k]) * mat;
  }
  return out;
}

u32 agreement_count(const CarlitzForm& form) {
  const ProjMatrix mat = form_to_matrix(form);
  u32 count = 0;
  for (u32 x = 0; x < form.modulus().value(); ++x) {
    const ProjPoint y = apply(mat, x);
    if (y && *y == form.eval(x)) ++count;
  }
  return count;
}

u32 a_linear_count(const Permutation& f, u32 a) {
  const PrimeModulus m = f.modulus();
  a %= m.value();
  u32 count = 0;
  for (u32 c = 0; c < m.value(); ++c) {
    if (f(c) == m.mul(a, c)) ++count;
  }
  return count;
}

Linearity linearity(const Permutation& f) {
  const PrimeModulus m = f.modulus();
  const u32 p = m.value();
  std::vector<u32> counts(p, 0);
  for (u32 c = 1; c < p; ++c) {
    const u32 a = m.mul(f(c), m.inv(c));
    if (a != 0) ++counts[a];
  }
  const u32 zero_bonus = f(0) == 0 ? 1 : 0;
  Linearity out;
  for (u32 a = 1; a < p; ++a) {
    if (counts[a] + zero_bonus > out.value) out = {counts[a] + zero_bonus, a};
  }
  return out;
}

MeasureReport measures(const Permutation& f) {
  const PolynomialRep poly = to_polynomial(f);
  const i64 p = f.degree();
  MeasureReport out;
  out.linearity = linearity(f).value;
  out.weight = poly.weight();
  out.degree = poly.degree();
  out.bound_from_linearity = p - out.linearity;
  out.bound_from_degree = p - out.degree - 1;
  if (out.weight > 2) {
    const i64 w = out.weight - 2;
    out.bound_from_weight = (p + w - 1) / w + 1;
  }
  return out;
}

namespace {

// Scans every form with lead alpha, n inversions, and shifts[0] in
// [first_begin, first_end), in lexicographic order of the shift tuple.
AlphaLinearCheck scan_alpha_forms(PrimeModulus m, u32 alpha, std::size_t n, u32 first_begin, u32 first_end) {
  const u32 p = m.value();
  std::vector<u32> inv(p), alpha_x(p);
  for (u32 x = 0; x < p; ++x) {
    inv[x] = m.inv_or_zero(x);
    alpha_x[x] = m.mul(alpha, x);
  }
  AlphaLinearCheck out;
  std::vector<u32> shifts(n + 1, 0);
  shifts[0] = first_begin;
  if (first_begin >= first_end) return out;
  while (true) {
    ++out.forms_checked;
    u32 misses = 0;
    for (u32 x = 0; x < p && misses <= 4; ++x) {
      u32 y = m.add(alpha_x[x], shifts[0]);
      for (std::size_t k = 1; k <= n; ++k) y = m.add(inv[y], shifts[k]);
      if (y != alpha_x[x]) ++misses;
    }
    if (misses != 0 && misses <= 4) {
      out.holds = false;
      out.counterexample = CarlitzForm(m, alpha, shifts);
      return out;
    }
    // odometer, last coordinate fastest
    std::size_t k = n;
    while (true) {
      if (k == 0) {
        if (++shifts[0] >= first_end) return out;
        break;
      }
      if (++shifts[k] < p) break;
      shifts[k] = 0;
      --k;
    }
  }
}

}  // namespace

AlphaLinearCheck check_alpha_linear_theorem(PrimeModulus m, u32 alpha, unsigned threads) {
  const u32 p = m.value();
  if (p < 13) throw UsageError("the alpha-linear check needs p >= 13");
  alpha %= p;
  if (alpha == 0) throw UsageError("alpha must be nonzero");
  threads = std::max(1u, std::min(threads, p));

  AlphaLinearCheck total;
  for (std::size_t n = 0; n <= 4; ++n) {
    std::vector<AlphaLinearCheck> parts(threads);
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < threads; ++t) {
      const u32 begin = static_cast<u32>(u64{p} * t / threads);
      const u32 end = static_cast<u32>(u64{p} * (t + 1) / threads);
      workers.emplace_back([&, t, begin, end] { parts[t] = scan_alpha_forms(m, alpha, n, begin, end); });
    }
    for (auto& w : workers) w.join();
    // Partitions are contiguous in enumeration order; the first failing one
    // holds the earliest counterexample, and the ones after it do not count.
    for (const AlphaLinearCheck& part : parts) {
      total.forms_checked += part.forms_checked;
      if (!part.holds) {
        total.holds = false;
        total.counterexample = part.counterexample;
        break;
      }
    }
    if (!total.holds) return total;
  }
  return total;
}

}  // namespace ppgen
