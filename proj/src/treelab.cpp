#include "ppgen/treelab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

namespace ppgen {

const char* to_string(LeafType t) {
  switch (t) {
    case LeafType::First:
      return "first";
    case LeafType::Second:
      return "second";
    case LeafType::Both:
      break;
  }
  return "both";
}

const char* to_string(TypeLabeling l) {
  return l == TypeLabeling::ShiftLast ? "first=shift-last" : "first=inversion-last";
}

const char* to_string(ExperimentMode mode) { return mode == ExperimentMode::Exhaustive ? "exhaustive" : "sampled"; }

const char* to_string(TestMethod t) {
  switch (t) {
    case TestMethod::ZTest:
      return "z";
    case TestMethod::ExactBinomial:
      return "exact";
    case TestMethod::Runs:
      break;
  }
  return "runs";
}

namespace {

// Whether the leaf of this type carries the trailing delta.
bool ends_with_delta(LeafType type, TypeLabeling labeling) {
  return (type == LeafType::Second) != (labeling == TypeLabeling::InversionLast);
}

bool same_cycle_raw(std::span<const u32> f, u32 a, u32 b) {
  for (u32 x = f[a]; x != a; x = f[x]) {
    if (x == b) return true;
  }
  return false;
}

// Incrementally maintained prefix maps for one lexicographic range of paths.
class LeafWalker {
 public:
  LeafWalker(PrimeModulus m, unsigned depth) : m_(m), depth_(depth), inv_(m.value()), levels_(depth + 1) {
    const u32 p = m.value();
    for (u32 x = 0; x < p; ++x) inv_[x] = m.inv_or_zero(x);
    levels_[0].resize(p);
    for (u32 x = 0; x < p; ++x) levels_[0][x] = x;
    for (unsigned k = 1; k <= depth; ++k) levels_[k].resize(p);
    delta_leaf_.resize(p);
  }

  // Recomputes levels from `from` (1-based) onward.
  void rebuild(const std::vector<u32>& digits, unsigned from) {
    for (unsigned k = from; k <= depth_; ++k) {
      const u32 shift = digits[k - 1];
      const std::vector<u32>& prev = levels_[k - 1];
      std::vector<u32>& cur = levels_[k];
      if (k == 1) {
        for (u32 x = 0; x < prev.size(); ++x) cur[x] = m_.add(prev[x], shift);
      } else {
        for (u32 x = 0; x < prev.size(); ++x) cur[x] = m_.add(inv_[prev[x]], shift);
      }
    }
  }

  // Returns (bit of shift-ending leaf, bit of delta-ending leaf).
  std::pair<std::uint8_t, std::uint8_t> bits() {
    const std::vector<u32>& g = levels_[depth_];
    for (u32 x = 0; x < g.size(); ++x) delta_leaf_[x] = inv_[g[x]];
    return {static_cast<std::uint8_t>(same_cycle_raw(g, 1, 2)),
            static_cast<std::uint8_t>(same_cycle_raw(delta_leaf_, 1, 2))};
  }

 private:
  PrimeModulus m_;
  unsigned depth_;
  std::vector<u32> inv_;
  std::vector<std::vector<u32>> levels_;
  std::vector<u32> delta_leaf_;
};

u64 leaf_count(u32 p, unsigned depth, u64 budget) {
  u64 total = 1;
  for (unsigned k = 0; k < depth; ++k) {
    if (total > std::numeric_limits<u64>::max() / (p - 1)) {
      throw BudgetExceeded("exhaustive tree scan", std::numeric_limits<u64>::max(), budget);
    }
    total *= p - 1;
  }
  return total;
}

void check_prime_has_points(PrimeModulus m) {
  if (m.value() < 3) throw UsageError("tree experiments need p >= 3");
}

}  // namespace

Permutation leaf_perm(const TreePath& path, PrimeModulus m, LeafType type, TypeLabeling labeling) {
  if (type == LeafType::Both) throw UsageError("a leaf is either of the first or of the second type");
  std::vector<u32> images(m.value());
  for (u32 x = 0; x < m.value(); ++x) {
    u32 y = x;
    for (std::size_t k = 0; k < path.indices.size(); ++k) {
      const u32 i = path.indices[k];
      if (i < 1 || i >= m.value()) throw UsageError("path index " + std::to_string(i) + " outside [1, p-1]");
      if (k != 0) y = m.inv_or_zero(y);
      y = m.add(y, i);
    }
    if (ends_with_delta(type, labeling)) y = m.inv_or_zero(y);
    images[x] = y;
  }
  return Permutation::trusted(m, std::move(images));
}

bool same_cycle(const Permutation& f, u32 a, u32 b) {
  if (a == b) throw UsageError("same_cycle needs two distinct points");
  if (a >= f.degree() || b >= f.degree()) throw UsageError("point outside the permuted set");
  return same_cycle_raw(f.images(), a, b);
}

std::vector<std::uint8_t> TreeBits::select(LeafType type) const {
  switch (type) {
    case LeafType::First:
      return first;
    case LeafType::Second:
      return second;
    case LeafType::Both:
      break;
  }
  std::vector<std::uint8_t> out(first.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = first[i] & second[i];
  return out;
}

TreeBits exhaustive_scan(PrimeModulus m, unsigned depth, const TreeOptions& opts) {
  check_prime_has_points(m);
  const u32 p = m.value();
  const u64 total = leaf_count(p, depth, opts.leaf_budget);
  if (total > opts.leaf_budget) throw BudgetExceeded("exhaustive tree scan", total, opts.leaf_budget);

  // Shift-ending and delta-ending bits, in lexicographic order.
  std::vector<std::uint8_t> shift_end(total), delta_end(total);
  const unsigned threads = static_cast<unsigned>(std::max<u64>(1, std::min<u64>(opts.threads, total)));

  auto work = [&](u64 begin, u64 end) {
    if (begin >= end) return;
    LeafWalker walker(m, depth);
    std::vector<u32> digits(depth);
    u64 rest = begin;
    for (unsigned k = depth; k-- > 0;) {
      digits[k] = static_cast<u32>(rest % (p - 1)) + 1;
      rest /= p - 1;
    }
    walker.rebuild(digits, 1);
    for (u64 leaf = begin; leaf < end; ++leaf) {
      const auto [s, d] = walker.bits();
      shift_end[leaf] = s;
      delta_end[leaf] = d;
      // odometer; the deepest changed digit decides where to rebuild
      unsigned k = depth;
      while (k > 0 && digits[k - 1] == p - 1) {
        digits[k - 1] = 1;
        --k;
      }
      if (k == 0) break;
      ++digits[k - 1];
      walker.rebuild(digits, k);
    }
  };

  std::vector<std::thread> workers;
  for (unsigned t = 0; t < threads; ++t) {
    const u64 begin = total * t / threads;
    const u64 end = total * (t + 1) / threads;
    workers.emplace_back(work, begin, end);
  }
  for (auto& w : workers) w.join();

  TreeBits out;
  if (opts.labeling == TypeLabeling::ShiftLast) {
    out.first = std::move(shift_end);
    out.second = std::move(delta_end);
  } else {
    out.first = std::move(delta_end);
    out.second = std::move(shift_end);
  }
  return out;
}

std::vector<std::uint8_t> exhaustive_bits(PrimeModulus m, unsigned depth, LeafType type, const TreeOptions& opts) {
  return exhaustive_scan(m, depth, opts).select(type);
}

ExperimentRecord make_record(PrimeModulus m, unsigned depth, LeafType type, ExperimentMode mode,
                             std::span<const std::uint8_t> bits, std::optional<u64> seed) {
  ExperimentRecord r;
  r.prime = m.value();
  r.depth = depth;
  r.type = type;
  r.mode = mode;
  r.n_observations = bits.size();
  r.n_success = static_cast<u64>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
  r.seed = seed;
  return r;
}

std::vector<TreePath> draw_paths(PrimeModulus m, unsigned depth, u64 n_samples, u64 seed) {
  if (n_samples == 0) throw UsageError("sampling needs at least one path");
  check_prime_has_points(m);
  std::mt19937_64 rng(seed);
  const u64 range = m.value() - 1;
  // Largest multiple of range representable; draws at or above it are retried.
  const u64 limit = std::numeric_limits<u64>::max() - std::numeric_limits<u64>::max() % range;
  std::vector<TreePath> paths(n_samples);
  for (TreePath& path : paths) {
    path.indices.resize(depth);
    for (u32& i : path.indices) {
      u64 draw;
      do {
        draw = rng();
      } while (draw >= limit);
      i = static_cast<u32>(draw % range) + 1;
    }
  }
  return paths;
}

SampleResult sample_paths(PrimeModulus m, unsigned depth, u64 n_samples, u64 seed, const TreeOptions& opts) {
  const std::vector<TreePath> paths = draw_paths(m, depth, n_samples, seed);
  std::vector<std::uint8_t> first(n_samples), second(n_samples);
  const unsigned threads = static_cast<unsigned>(std::max<u64>(1, std::min<u64>(opts.threads, n_samples)));
  auto work = [&](u64 begin, u64 end) {
    for (u64 s = begin; s < end; ++s) {
      const Permutation f = leaf_perm(paths[s], m, LeafType::First, opts.labeling);
      const Permutation g = leaf_perm(paths[s], m, LeafType::Second, opts.labeling);
      first[s] = same_cycle_raw(f.images(), 1, 2);
      second[s] = same_cycle_raw(g.images(), 1, 2);
    }
  };
  std::vector<std::thread> workers;
  for (unsigned t = 0; t < threads; ++t) workers.emplace_back(work, n_samples * t / threads, n_samples * (t + 1) / threads);
  for (auto& w : workers) w.join();

  SampleResult out;
  out.bits.first = std::move(first);
  out.bits.second = std::move(second);
  const auto both = out.bits.select(LeafType::Both);
  out.first = make_record(m, depth, LeafType::First, ExperimentMode::Sampled, out.bits.first, seed);
  out.second = make_record(m, depth, LeafType::Second, ExperimentMode::Sampled, out.bits.second, seed);
  out.both = make_record(m, depth, LeafType::Both, ExperimentMode::Sampled, both, seed);
  return out;
}

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

TestResult from_z(double z) {
  TestResult r;
  r.statistic = z;
  r.p_less = normal_cdf(z);
  r.p_greater = normal_cdf(-z);
  r.p_two_sided = std::min(1.0, 2.0 * std::min(r.p_less, r.p_greater));
  return r;
}

}  // namespace

TestResult proportion_test(u64 n_success, u64 n_observations, double null_p, TestMethod method) {
  if (n_observations == 0) throw UsageError("proportion test needs at least one observation");
  if (n_success > n_observations) throw UsageError("more successes than observations");
  if (!(null_p > 0.0 && null_p < 1.0)) throw UsageError("null proportion must lie strictly between 0 and 1");
  const double n = static_cast<double>(n_observations);
  const double k = static_cast<double>(n_success);

  if (method == TestMethod::ZTest) return from_z((k / n - null_p) / std::sqrt(null_p * (1.0 - null_p) / n));
  if (method != TestMethod::ExactBinomial) throw UsageError("the runs test works on a sequence, not on counts");

  const double log_p = std::log(null_p);
  const double log_q = std::log1p(-null_p);
  const double log_n_fact = std::lgamma(n + 1.0);
  auto log_pmf = [&](u64 i) {
    const double x = static_cast<double>(i);
    return log_n_fact - std::lgamma(x + 1.0) - std::lgamma(n - x + 1.0) + x * log_p + (n - x) * log_q;
  };
  const double observed = log_pmf(n_success);
  // Relative tolerance when comparing probabilities, as in common implementations.
  const double threshold = observed + std::log1p(1e-7);
  double less = 0.0, greater = 0.0, two = 0.0;
  for (u64 i = 0; i <= n_observations; ++i) {
    const double lp = log_pmf(i);
    const double pr = std::exp(lp);
    if (i <= n_success) less += pr;
    if (i >= n_success) greater += pr;
    if (lp <= threshold) two += pr;
  }
  TestResult r;
  r.statistic = k;
  r.p_less = std::min(1.0, less);
  r.p_greater = std::min(1.0, greater);
  r.p_two_sided = std::min(1.0, two);
  return r;
}

TestResult runs_test(std::span<const std::uint8_t> bits) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double n = static_cast<double>(bits.size());
  const double ones = static_cast<double>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
  const double zeros = n - ones;
  if (bits.size() < 2) return {nan, nan, nan, nan};
  const double product = 2.0 * ones * zeros;
  const double variance = product * (product - n) / (n * n * (n - 1.0));
  if (!(variance > 0.0)) return {nan, nan, nan, nan};
  u64 runs = 1;
  for (std::size_t i = 1; i < bits.size(); ++i) runs += bits[i] != bits[i - 1];
  const double expected = product / n + 1.0;
  return from_z((static_cast<double>(runs) - expected) / std::sqrt(variance));
}

}  // namespace ppgen
