#pragma once

// Nested inversion forms
//
//   P_n(x) = (...((lead*x + s_0)^(p-2) + s_1)^(p-2) ... + s_{n-1})^(p-2) + s_n
//
// built from the shift sigma = x + 1 and the inversion delta = x^(p-2), and
// exact (weak) Carlitz rank search over them.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ppgen/perm.hpp"

namespace ppgen {

class CarlitzForm {
 public:
  // shifts = {s_0, s_1, ..., s_n}; n = shifts.size() - 1 inversions.
  // Throws UsageError for lead = 0 or an empty shift list.
  CarlitzForm(PrimeModulus m, u32 lead, std::vector<u32> shifts);

  static CarlitzForm affine(PrimeModulus m, u32 a, u32 b) { return {m, a, {b}}; }

  PrimeModulus modulus() const noexcept { return m_; }
  u32 lead() const noexcept { return lead_; }
  // The innermost additive constant.
  u32 inner_shift() const noexcept { return shifts_.front(); }
  const std::vector<u32>& shifts() const noexcept { return shifts_; }
  std::size_t inversions() const noexcept { return shifts_.size() - 1; }

  // Evaluation with the polynomial convention 0^(p-2) = 0.
  u32 eval(u32 x) const noexcept;
  // One more layer: invert, then add s.
  CarlitzForm then_invert_and_shift(u32 s) const;

  friend bool operator==(const CarlitzForm&, const CarlitzForm&) = default;

 private:
  PrimeModulus m_;
  u32 lead_;
  std::vector<u32> shifts_;
};

FieldElement eval_form(const CarlitzForm& form, const FieldElement& x);
Permutation form_to_perm(const CarlitzForm& form);

// A word over {S(k), D}, read left to right: the leftmost token acts first.
// The group word sigma^3 delta in product notation (rightmost factor acts
// first) is therefore the token list D S(3).
class SigmaDeltaWord {
 public:
  struct Token {
    enum class Kind { Shift, Delta } kind;
    u32 k = 0;  // shift amount, for Kind::Shift

    static Token shift(u32 k) { return {Kind::Shift, k}; }
    static Token delta() { return {Kind::Delta, 0}; }
    friend bool operator==(const Token&, const Token&) = default;
  };

  explicit SigmaDeltaWord(PrimeModulus m, std::vector<Token> tokens = {});

  // Whitespace-separated tokens such as "D S3 D S10"; "S-1" means S(p-1).
  static SigmaDeltaWord parse(std::string_view text, PrimeModulus m);

  PrimeModulus modulus() const noexcept { return m_; }
  const std::vector<Token>& tokens() const noexcept { return tokens_; }
  std::size_t inversion_count() const noexcept;

  // Merges adjacent shifts mod p, drops S(0), and cancels D D pairs.
  SigmaDeltaWord normalized() const;
  std::string to_string() const;

 private:
  PrimeModulus m_;
  std::vector<Token> tokens_;
};

Permutation word_eval(const SigmaDeltaWord& w);
// The equivalent nested form with lead 1.
CarlitzForm word_to_form(const SigmaDeltaWord& w);

// sigma^3 delta . sigma^-1 delta . (sigma delta)^3 . sigma^-1 delta in
// application order; evaluates to (0 1)(2 3) for every p >= 5.
SigmaDeltaWord lemma_word(PrimeModulus m);

struct RankResult {
  // nullopt when no form with at most max_n inversions exists.
  std::optional<unsigned> rank;
  std::optional<CarlitzForm> witness;
  // True when every smaller inversion count was exhaustively excluded.
  bool certified_exact = false;
  // Distinct states stored by the search.
  u64 states_explored = 0;
};

enum class LeadSet { Any, One, PlusMinusOne };

struct RankSearchOptions {
  u64 state_budget = 20'000'000;
};

// Layered search over forms. Layer 0 holds the affine maps a x + b with
// a in the lead set; layer k+1 applies delta and then every shift to layer k.
// For max_n >= 5 the search meets in the middle: a forward ball of depth
// ceil(max_n / 2) against a backward frontier grown from the target.
RankResult carlitz_rank(const Permutation& target, unsigned max_n, const RankSearchOptions& opts = {});
RankResult weak_carlitz_rank(const Permutation& target, unsigned max_n, LeadSet leads = LeadSet::One,
                             const RankSearchOptions& opts = {});
RankResult rank_search(const Permutation& target, unsigned max_n, LeadSet leads, const RankSearchOptions& opts = {});

// Minimal inversion count for every permutation reachable from the lead set,
// by breadth-first search until the layers stop growing (or max_layers).
// Keys are image arrays.
struct RankCensus {
  std::vector<std::vector<u32>> perms;
  std::vector<unsigned> ranks;
  unsigned layers = 0;
};
RankCensus rank_census(PrimeModulus m, LeadSet leads, unsigned max_layers, const RankSearchOptions& opts = {});

}  // namespace ppgen
