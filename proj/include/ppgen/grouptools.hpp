#pragma once

// Exact order and membership for subgroups of S_p via a stabilizer chain,
// plus the counting results for the family x^d + c.

#include <deque>
#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ppgen/perm.hpp"

namespace ppgen {

using BigInt = boost::multiprecision::cpp_int;

BigInt factorial(u32 n);

// Deterministic Schreier-Sims. Base points are taken greedily as the smallest
// point moved by the generator that opens a new level.
class StabilizerChain {
 public:
  StabilizerChain(PrimeModulus m, std::span<const Permutation> generators);

  PrimeModulus modulus() const noexcept { return m_; }
  BigInt order() const;
  bool contains(const Permutation& f) const;
  std::vector<u32> base() const;
  std::vector<std::size_t> transversal_sizes() const;

 private:
  using Images = std::vector<u32>;
  struct Level {
    u32 base_point = 0;
    std::vector<Images> generators;
    std::vector<u32> orbit;
    // Indexed by point; empty when the point is outside the orbit. rep[b]
    // maps base_point to b, rep_inv[b] is its inverse.
    std::vector<Images> rep;
    std::vector<Images> rep_inv;
  };
  struct SiftResult {
    Images residue;
    std::size_t stopped_at;
  };

  SiftResult sift(Images g, std::size_t from) const;
  void extend(std::size_t level, Images g);
  bool is_identity(const Images& g) const;

  PrimeModulus m_;
  std::deque<Level> levels_;
};

StabilizerChain build_chain(PrimeModulus m, std::span<const Permutation> generators);
BigInt group_order(const StabilizerChain& chain);
bool contains(const StabilizerChain& chain, const Permutation& f);

enum class GroupVerdict { Symmetric, Alternating, Other };

const char* to_string(GroupVerdict v);

struct GenerationVerdict {
  u32 prime = 0;
  GroupVerdict verdict = GroupVerdict::Other;
  BigInt order;
  // Present iff verdict is Symmetric.
  std::optional<Permutation> witness_odd;
};

// Order of <sigma, delta>, optionally with x -> -x adjoined. The verdict
// follows from comparing the order with p! and p!/2.
GenerationVerdict verify_generation(PrimeModulus m, bool adjoin_negation = false);

// Number of distinct permutations x^d + c over all valid (d, c).
u64 count_distinct_fdc(PrimeModulus m);
// Number of distinct right cosets <sigma> (x^d) over valid d.
u64 coset_count(PrimeModulus m);

}  // namespace ppgen
