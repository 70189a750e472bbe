#pragma once

// Experiments on the (sigma, delta) inverse tree. A path (i_1, ..., i_d) with
// i_k in [1, p-1] selects the leaf map
//
//   sigma^{i_1}, delta, sigma^{i_2}, delta, ..., delta, sigma^{i_d}
//
// (application order). The leaf either ends with that shift block or with one
// more delta; which of the two is called "first type" is set by TypeLabeling.
// Every experiment asks whether 2 lies in the cycle of 1.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ppgen/perm.hpp"

namespace ppgen {

enum class LeafType { First, Second, Both };

enum class TypeLabeling {
  // First type ends with the shift block; second type adds a trailing delta.
  ShiftLast,
  // First type ends with delta; second type ends with the shift block.
  InversionLast,
};

const char* to_string(LeafType t);
const char* to_string(TypeLabeling l);

struct TreePath {
  std::vector<u32> indices;

  std::size_t depth() const noexcept { return indices.size(); }
  friend auto operator<=>(const TreePath&, const TreePath&) = default;
};

// Throws UsageError for indices outside [1, p-1] or for LeafType::Both.
Permutation leaf_perm(const TreePath& path, PrimeModulus m, LeafType type,
                      TypeLabeling labeling = TypeLabeling::ShiftLast);

// True iff b lies in the forward orbit of a. Requires a != b.
bool same_cycle(const Permutation& f, u32 a, u32 b);

struct TreeOptions {
  u64 leaf_budget = 10'000'000;
  unsigned threads = 1;
  TypeLabeling labeling = TypeLabeling::ShiftLast;
};

struct TreeBits {
  std::vector<std::uint8_t> first;
  std::vector<std::uint8_t> second;

  std::vector<std::uint8_t> select(LeafType type) const;
};

// All (p-1)^depth leaves in lexicographic path order. Throws BudgetExceeded
// when the leaf count is over the budget.
TreeBits exhaustive_scan(PrimeModulus m, unsigned depth, const TreeOptions& opts = {});
std::vector<std::uint8_t> exhaustive_bits(PrimeModulus m, unsigned depth, LeafType type, const TreeOptions& opts = {});

enum class ExperimentMode { Exhaustive, Sampled };

const char* to_string(ExperimentMode mode);

struct ExperimentRecord {
  u32 prime = 0;
  unsigned depth = 0;
  LeafType type = LeafType::First;
  ExperimentMode mode = ExperimentMode::Exhaustive;
  u64 n_observations = 0;
  u64 n_success = 0;
  std::optional<u64> seed;

  double proportion() const { return n_observations == 0 ? 0.0 : double(n_success) / double(n_observations); }
  friend bool operator==(const ExperimentRecord&, const ExperimentRecord&) = default;
};

ExperimentRecord make_record(PrimeModulus m, unsigned depth, LeafType type, ExperimentMode mode,
                             std::span<const std::uint8_t> bits, std::optional<u64> seed = std::nullopt);

struct SampleResult {
  ExperimentRecord first, second, both;
  TreeBits bits;  // one entry per sampled path, in draw order
};

inline constexpr const char* kSamplerId = "mt19937_64/rejection";

// Uniform independent paths from a seeded mt19937_64 (rejection sampling for
// the index range). The path sequence depends only on the seed.
std::vector<TreePath> draw_paths(PrimeModulus m, unsigned depth, u64 n_samples, u64 seed);
SampleResult sample_paths(PrimeModulus m, unsigned depth, u64 n_samples, u64 seed, const TreeOptions& opts = {});

enum class TestMethod { ZTest, ExactBinomial, Runs };

const char* to_string(TestMethod t);

struct TestResult {
  double p_two_sided = 1.0;
  double p_less = 0.5;
  double p_greater = 0.5;
  double statistic = 0.0;
};

// One-sample test of n_success / n against null_p. The z-test uses the null
// standard error; the exact variant sums binomial probabilities (two-sided:
// outcomes no more likely than the observed one).
TestResult proportion_test(u64 n_success, u64 n_observations, double null_p = 0.5,
                           TestMethod method = TestMethod::ZTest);

// Wald-Wolfowitz runs test on a 0/1 sequence, normal approximation. Less means
// fewer runs than expected. All fields are NaN when the null variance is zero
// (for instance a constant sequence).
TestResult runs_test(std::span<const std::uint8_t> bits);

}  // namespace ppgen
