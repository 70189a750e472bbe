#include "ppgen/grouptools.hpp"

#include <numeric>
#include <set>

namespace ppgen {

BigInt factorial(u32 n) {
  BigInt out = 1;
  for (u32 k = 2; k <= n; ++k) out *= k;
  return out;
}

StabilizerChain::StabilizerChain(PrimeModulus m, std::span<const Permutation> generators) : m_(m) {
  for (const Permutation& g : generators) {
    if (g.modulus() != m) throw UsageError("generator acts on a different degree");
    Images images(g.images().begin(), g.images().end());
    SiftResult s = sift(images, 0);
    if (is_identity(s.residue)) continue;
    extend(0, std::move(images));
  }
}

bool StabilizerChain::is_identity(const Images& g) const {
  for (u32 x = 0; x < g.size(); ++x) {
    if (g[x] != x) return false;
  }
  return true;
}

StabilizerChain::SiftResult StabilizerChain::sift(Images g, std::size_t from) const {
  for (std::size_t i = from; i < levels_.size(); ++i) {
    const Level& level = levels_[i];
    const u32 b = g[level.base_point];
    if (level.rep[b].empty()) return {std::move(g), i};
    const Images& u_inv = level.rep_inv[b];
    for (u32& y : g) y = u_inv[y];
  }
  return {std::move(g), levels_.size()};
}

// Adds g (which fixes the base points above `level`) to the generators of
// `level` and restores closure: every Schreier generator of the level sifts
// to the identity through the levels below.
void StabilizerChain::extend(std::size_t level_index, Images g) {
  const u32 p = m_.value();
  if (level_index == levels_.size()) {
    Level fresh;
    u32 moved = 0;
    while (g[moved] == moved) ++moved;
    fresh.base_point = moved;
    fresh.rep.resize(p);
    fresh.rep_inv.resize(p);
    Images id(p);
    std::iota(id.begin(), id.end(), 0u);
    fresh.rep[moved] = id;
    fresh.rep_inv[moved] = id;
    fresh.orbit.push_back(moved);
    levels_.push_back(std::move(fresh));
  }
  Level& level = levels_[level_index];
  level.generators.push_back(std::move(g));
  const std::size_t new_gen = level.generators.size() - 1;
  const std::size_t old_orbit = level.orbit.size();

  auto add_point = [&](u32 c, const Images& s, const Images& u_b) {
    Images u(p), u_inv(p);
    for (u32 x = 0; x < p; ++x) u[x] = s[u_b[x]];
    for (u32 x = 0; x < p; ++x) u_inv[u[x]] = x;
    level.rep[c] = std::move(u);
    level.rep_inv[c] = std::move(u_inv);
    level.orbit.push_back(c);
  };

  {
    const Images& s = level.generators[new_gen];
    for (std::size_t i = 0; i < old_orbit; ++i) {
      const u32 b = level.orbit[i];
      const u32 c = s[b];
      if (level.rep[c].empty()) add_point(c, s, level.rep[b]);
    }
  }
  for (std::size_t i = old_orbit; i < level.orbit.size(); ++i) {
    const u32 b = level.orbit[i];
    for (const Images& s : level.generators) {
      const u32 c = s[b];
      if (level.rep[c].empty()) add_point(c, s, level.rep[b]);
    }
  }

  // Pairs (b, s) with both b and s old were already closed before this call.
  for (std::size_t i = 0; i < level.orbit.size(); ++i) {
    for (std::size_t j = 0; j < level.generators.size(); ++j) {
      if (i < old_orbit && j != new_gen) continue;
      const u32 b = level.orbit[i];
      const Images& s = level.generators[j];
      const Images& u_b = level.rep[b];
      const Images& u_sb_inv = level.rep_inv[s[b]];
      Images h(p);
      for (u32 x = 0; x < p; ++x) h[x] = u_sb_inv[s[u_b[x]]];
      SiftResult r = sift(std::move(h), level_index + 1);
      if (!is_identity(r.residue)) extend(level_index + 1, std::move(r.residue));
    }
  }
}

BigInt StabilizerChain::order() const {
  BigInt out = 1;
  for (const Level& level : levels_) out *= level.orbit.size();
  return out;
}

bool StabilizerChain::contains(const Permutation& f) const {
  if (f.modulus() != m_) return false;
  SiftResult r = sift(Images(f.images().begin(), f.images().end()), 0);
  return r.stopped_at == levels_.size() && is_identity(r.residue);
}

std::vector<u32> StabilizerChain::base() const {
  std::vector<u32> out;
  for (const Level& level : levels_) out.push_back(level.base_point);
  return out;
}

std::vector<std::size_t> StabilizerChain::transversal_sizes() const {
  std::vector<std::size_t> out;
  for (const Level& level : levels_) out.push_back(level.orbit.size());
  return out;
}

StabilizerChain build_chain(PrimeModulus m, std::span<const Permutation> generators) {
  return StabilizerChain(m, generators);
}

BigInt group_order(const StabilizerChain& chain) { return chain.order(); }

bool contains(const StabilizerChain& chain, const Permutation& f) { return chain.contains(f); }

const char* to_string(GroupVerdict v) {
  switch (v) {
    case GroupVerdict::Symmetric:
      return "Symmetric";
    case GroupVerdict::Alternating:
      return "Alternating";
    case GroupVerdict::Other:
      break;
  }
  return "Other";
}

GenerationVerdict verify_generation(PrimeModulus m, bool adjoin_negation) {
  std::vector<Permutation> gens{shift_sigma(m), inversion_delta(m)};
  if (adjoin_negation) gens.push_back(negation_perm(m));
  const StabilizerChain chain(m, gens);

  GenerationVerdict out;
  out.prime = m.value();
  out.order = chain.order();
  const BigInt full = factorial(m.value());
  if (out.order == full) {
    out.verdict = GroupVerdict::Symmetric;
    for (const Permutation& g : gens) {
      if (sign(g) == Parity::Odd) {
        out.witness_odd = g;
        break;
      }
    }
  } else if (out.order * 2 == full) {
    out.verdict = GroupVerdict::Alternating;
  }
  return out;
}

namespace {

std::vector<u64> valid_exponents(PrimeModulus m) {
  const u64 p = m.value();
  std::vector<u64> out;
  for (u64 d = 1; d < p - 1; ++d) {
    if (std::gcd(d, p - 1) == 1) out.push_back(d);
  }
  return out;
}

}  // namespace

u64 count_distinct_fdc(PrimeModulus m) {
  std::set<std::vector<u32>> seen;
  for (u64 d : valid_exponents(m)) {
    for (u32 c = 0; c < m.value(); ++c) {
      const Permutation f = poly_perm(d, c, m);
      seen.emplace(f.images().begin(), f.images().end());
    }
  }
  return seen.size();
}

u64 coset_count(PrimeModulus m) {
  // <sigma> g = { x -> g(x) + k }; translating so that 0 -> 0 picks one
  // representative per right coset.
  std::set<std::vector<u32>> keys;
  for (u64 d : valid_exponents(m)) {
    const Permutation f = poly_perm(d, 0, m);
    std::vector<u32> key(m.value());
    for (u32 x = 0; x < m.value(); ++x) key[x] = m.sub(f(x), f(0));
    keys.insert(std::move(key));
  }
  return keys.size();
}

}  // namespace ppgen
