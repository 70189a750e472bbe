#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "ppgen/carlitz.hpp"

using namespace ppgen;
using T = SigmaDeltaWord::Token;

namespace {

Permutation random_perm(PrimeModulus m, std::mt19937_64& rng) {
  std::vector<u32> v(m.value());
  std::iota(v.begin(), v.end(), 0u);
  std::shuffle(v.begin(), v.end(), rng);
  return Permutation(m, v);
}

SigmaDeltaWord random_word(PrimeModulus m, std::mt19937_64& rng) {
  std::vector<T> tokens;
  const int len = static_cast<int>(rng() % 12);
  for (int i = 0; i < len; ++i) {
    if (rng() % 2) {
      tokens.push_back(T::delta());
    } else {
      tokens.push_back(T::shift(1 + static_cast<u32>(rng() % (m.value() - 1))));
    }
  }
  return SigmaDeltaWord(m, tokens);
}

std::map<oracle::Images, unsigned> census_map(const RankCensus& c) {
  std::map<oracle::Images, unsigned> out;
  for (std::size_t i = 0; i < c.perms.size(); ++i) {
    oracle::Images img(c.perms[i].begin(), c.perms[i].end());
    out.emplace(img, c.ranks[i]);
  }
  return out;
}

}  // namespace

TEST_CASE("form evaluation") {
  const PrimeModulus m5(5), m7(7);
  CHECK(form_to_perm(CarlitzForm(m5, 1, {0})).is_identity());
  CHECK(to_cycle_string(form_to_perm(CarlitzForm(m5, 1, {0, 0}))) == "(2 3)");
  CHECK(to_cycle_string(form_to_perm(word_to_form(lemma_word(m7)))) == "(0 1)(2 3)");
  CHECK_THROWS_AS(CarlitzForm(m5, 0, {1}), UsageError);
  CHECK_THROWS_AS(CarlitzForm(m5, 1, {}), UsageError);

  const CarlitzForm f(m7, 3, {2, 5, 1});
  CHECK(f.inversions() == 2);
  CHECK(f.inner_shift() == 2);
  for (u32 x = 0; x < 7; ++x) CHECK(eval_form(f, FieldElement(m7, x)).value() == f.eval(x));
  const oracle::Images expected = oracle::form_images(7, 3, {2, 5, 1});
  CHECK(std::equal(expected.begin(), expected.end(), form_to_perm(f).images().begin()));
  CHECK(f.then_invert_and_shift(4) == CarlitzForm(m7, 3, {2, 5, 1, 4}));
  CHECK(CarlitzForm::affine(m7, 2, 3) == CarlitzForm(m7, 2, {3}));
}

TEST_CASE("forms always give permutations") {
  std::mt19937_64 rng(1);
  for (u32 p : {5u, 7u, 11u, 13u}) {
    const PrimeModulus m(p);
    for (int i = 0; i < 100; ++i) {
      std::vector<u32> shifts(1 + rng() % 6);
      for (auto& s : shifts) s = rng() % p;
      const CarlitzForm f(m, 1 + rng() % (p - 1), shifts);
      std::vector<u32> img(f.modulus().value());
      for (u32 x = 0; x < p; ++x) img[x] = f.eval(x);
      CHECK_NOTHROW(Permutation(m, img));
    }
  }
}

TEST_CASE("word parsing and normalization") {
  const PrimeModulus m(7);
  const SigmaDeltaWord w = SigmaDeltaWord::parse("D S3 S S-1 D D S0 S2", m);
  CHECK(w.tokens().size() == 8);
  CHECK(w.tokens()[2] == T::shift(1));
  CHECK(w.tokens()[3] == T::shift(6));
  CHECK(w.inversion_count() == 3);
  const SigmaDeltaWord n = w.normalized();
  CHECK(n.to_string() == "D S5");
  CHECK(word_eval(n) == word_eval(w));
  CHECK(SigmaDeltaWord::parse("", m).tokens().empty());
  CHECK(SigmaDeltaWord::parse("S4 S3", m).normalized().tokens().empty());
  CHECK_THROWS_AS(SigmaDeltaWord::parse("D X", m), UsageError);
  CHECK_THROWS_AS(SigmaDeltaWord::parse("S3x", m), UsageError);
}

TEST_CASE("word evaluation") {
  const PrimeModulus m(7);
  CHECK(word_eval(SigmaDeltaWord(m)).is_identity());
  CHECK(word_eval(SigmaDeltaWord(m, {T::delta(), T::delta()})).is_identity());
  // leftmost acts first: D then S1 sends 2 -> 4 + 1
  const Permutation ds = word_eval(SigmaDeltaWord(m, {T::delta(), T::shift(1)}));
  CHECK(ds(2) == 5);
  const Permutation sd = word_eval(SigmaDeltaWord(m, {T::shift(1), T::delta()}));
  CHECK(sd(2) == 5);  // 3^-1 = 5
  CHECK(sd(1) == 4);  // 2^-1 = 4
  CHECK(ds(1) == 2);
}

TEST_CASE("the (0 1)(2 3) word") {
  CHECK_THROWS_AS(lemma_word(PrimeModulus(3)), UsageError);
  for (u32 p = 5; p <= 199; ++p) {
    if (!is_prime(p)) continue;
    const SigmaDeltaWord w = lemma_word(PrimeModulus(p));
    CHECK(w.inversion_count() == 6);
    CHECK(to_cycle_string(word_eval(w)) == "(0 1)(2 3)");
  }
  const CarlitzForm f = word_to_form(lemma_word(PrimeModulus(11)));
  CHECK(f.lead() == 1);
  CHECK(f.shifts() == std::vector<u32>{0, 10, 1, 1, 1, 10, 3});
}

TEST_CASE("word to form agrees with word evaluation") {
  std::mt19937_64 rng(8);
  for (u32 p : {5u, 7u, 11u, 13u}) {
    const PrimeModulus m(p);
    for (int i = 0; i < 100; ++i) {
      const SigmaDeltaWord w = random_word(m, rng);
      const CarlitzForm f = word_to_form(w);
      CHECK(f.inversions() == w.inversion_count());
      CHECK(form_to_perm(f) == word_eval(w));
    }
  }
}

TEST_CASE("rank examples") {
  const PrimeModulus m7(7), m11(11), m17(17);
  const auto affine = affine_perm(FieldElement(m11, 3), FieldElement(m11, 5));
  CHECK(carlitz_rank(affine, 3).rank == 0u);
  CHECK(carlitz_rank(Permutation::identity(m11), 3).rank == 0u);
  CHECK(weak_carlitz_rank(shift_sigma(m11, 3), 3).rank == 0u);

  const RankResult weak2x = weak_carlitz_rank(affine_perm(FieldElement(m7, 2), FieldElement(m7, 0)), 2);
  CHECK_FALSE(weak2x.rank.has_value());
  CHECK_FALSE(weak2x.certified_exact);

  const Permutation target = parse_cycles("(0 1)(2 3)", m17);
  const RankResult r = carlitz_rank(target, 6);
  REQUIRE(r.rank.has_value());
  CHECK(*r.rank == 6);
  CHECK(r.certified_exact);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->inversions() == 6);
  CHECK(form_to_perm(*r.witness) == target);

  const RankResult w = weak_carlitz_rank(target, 6);
  CHECK(w.rank == 6u);
  REQUIRE(w.witness.has_value());
  CHECK(w.witness->lead() == 1);
  CHECK(form_to_perm(*w.witness) == target);

  CHECK_FALSE(carlitz_rank(target, 5).rank.has_value());
  CHECK_FALSE(carlitz_rank(target, 4).rank.has_value());
}

TEST_CASE("rank search budget") {
  const PrimeModulus m(17);
  RankSearchOptions tiny;
  tiny.state_budget = 1000;
  CHECK_THROWS_AS(carlitz_rank(parse_cycles("(0 1)(2 3)", m), 6, tiny), BudgetExceeded);
  CHECK_THROWS_AS(carlitz_rank(Permutation::identity(PrimeModulus(257)), 2), UsageError);
}

TEST_CASE("census at p = 5 matches brute-force layers and covers S_5") {
  const PrimeModulus m(5);
  const RankCensus any = rank_census(m, LeadSet::Any, 20);
  const RankCensus one = rank_census(m, LeadSet::One, 20);
  CHECK(any.perms.size() == 120);
  CHECK(one.perms.size() == 120);
  const auto any_map = census_map(any);
  const auto one_map = census_map(one);
  CHECK(any_map == oracle::layered_ranks(5, {1, 2, 3, 4}, any.layers));
  CHECK(one_map == oracle::layered_ranks(5, {1}, one.layers));
  for (const auto& [perm, r] : any_map) CHECK(r <= one_map.at(perm));
  const RankCensus pm = rank_census(m, LeadSet::PlusMinusOne, 20);
  for (const auto& [perm, r] : census_map(pm)) {
    CHECK(any_map.at(perm) <= r);
    CHECK(r <= one_map.at(perm));
  }
}

TEST_CASE("rank at p = 7 against the census, and Crk <= wCrk") {
  const PrimeModulus m(7);
  const auto any_map = census_map(rank_census(m, LeadSet::Any, 30));
  const auto one_map = census_map(rank_census(m, LeadSet::One, 30));
  // a x has odd sign for a of even order, so free leads reach all of S_7
  CHECK(any_map.size() == 5040);
  CHECK(one_map.size() == 2520);
  CHECK(any_map == oracle::layered_ranks(7, {1, 2, 3, 4, 5, 6}, 30));
  CHECK(one_map == oracle::layered_ranks(7, {1}, 30));
  std::mt19937_64 rng(12);
  for (int i = 0; i < 200; ++i) {
    const Permutation f = random_perm(m, rng);
    const oracle::Images img(f.images().begin(), f.images().end());
    const RankResult c = carlitz_rank(f, 8);
    const RankResult w = weak_carlitz_rank(f, 8);
    REQUIRE(c.rank.has_value());
    CHECK(*c.rank == any_map.at(img));
    CHECK(form_to_perm(*c.witness) == f);
    if (sign(f) == Parity::Odd) {
      CHECK_FALSE(w.rank.has_value());
      CHECK_FALSE(one_map.count(img));
      continue;
    }
    REQUIRE(w.rank.has_value());
    CHECK(*w.rank == one_map.at(img));
    CHECK(*c.rank <= *w.rank);
    CHECK(form_to_perm(*w.witness) == f);
    // plain layered search and the split search agree
    const RankResult small = weak_carlitz_rank(f, 4);
    if (*w.rank <= 4) {
      CHECK(small.rank == w.rank);
    } else {
      CHECK_FALSE(small.rank.has_value());
    }
  }
}

TEST_CASE("rank is invariant under conjugation by shifts") {
  std::mt19937_64 rng(31);
  for (u32 p : {7u, 11u}) {
    const PrimeModulus m(p);
    for (int i = 0; i < 10; ++i) {
      const SigmaDeltaWord w = random_word(m, rng);
      const Permutation f = word_eval(w);
      const RankResult base = carlitz_rank(f, 6);
      for (u32 k = 1; k < p; k += 3) {
        const Permutation conj = compose(shift_sigma(m, k), compose(f, shift_sigma(m, p - k)));
        CHECK(carlitz_rank(conj, 6).rank == base.rank);
      }
    }
  }
  const PrimeModulus m(13);
  const Permutation t = parse_cycles("(0 1)(2 3)", m);
  for (u32 a : {1u, 5u}) {
    const Permutation moved = compose(shift_sigma(m, a), compose(t, shift_sigma(m, 13 - a)));
    CHECK(weak_carlitz_rank(moved, 6).rank == weak_carlitz_rank(t, 6).rank);
  }
}
