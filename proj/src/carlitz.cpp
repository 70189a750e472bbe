#include "ppgen/carlitz.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <limits>

namespace ppgen {

CarlitzForm::CarlitzForm(PrimeModulus m, u32 lead, std::vector<u32> shifts)
    : m_(m), lead_(lead % m.value()), shifts_(std::move(shifts)) {
  if (lead_ == 0) throw UsageError("form lead coefficient must be nonzero");
  if (shifts_.empty()) throw UsageError("form needs at least the inner shift");
  for (u32& s : shifts_) s %= m.value();
}

u32 CarlitzForm::eval(u32 x) const noexcept {
  u32 y = m_.add(m_.mul(lead_, x % m_.value()), shifts_[0]);
  for (std::size_t k = 1; k < shifts_.size(); ++k) y = m_.add(m_.inv_or_zero(y), shifts_[k]);
  return y;
}

CarlitzForm CarlitzForm::then_invert_and_shift(u32 s) const {
  std::vector<u32> shifts = shifts_;
  shifts.push_back(s % m_.value());
  return {m_, lead_, std::move(shifts)};
}

FieldElement eval_form(const CarlitzForm& form, const FieldElement& x) {
  if (x.modulus() != form.modulus()) throw UsageError("point and form belong to different fields");
  return {form.modulus(), static_cast<i64>(form.eval(x.value()))};
}

Permutation form_to_perm(const CarlitzForm& form) {
  const u32 p = form.modulus().value();
  std::vector<u32> images(p);
  for (u32 x = 0; x < p; ++x) images[x] = form.eval(x);
  return Permutation::trusted(form.modulus(), std::move(images));
}

SigmaDeltaWord::SigmaDeltaWord(PrimeModulus m, std::vector<Token> tokens) : m_(m), tokens_(std::move(tokens)) {
  for (Token& t : tokens_) {
    if (t.kind == Token::Kind::Shift) t.k %= m.value();
  }
}

SigmaDeltaWord SigmaDeltaWord::parse(std::string_view text, PrimeModulus m) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      ++i;
    } else if (c == 'D' || c == 'd') {
      tokens.push_back(Token::delta());
      ++i;
    } else if (c == 'S' || c == 's') {
      ++i;
      bool negative = false;
      if (i < text.size() && text[i] == '-') {
        negative = true;
        ++i;
      }
      u64 k = 0;
      const std::size_t digits_begin = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        k = (k * 10 + static_cast<u64>(text[i] - '0')) % m.value();
        ++i;
      }
      if (i == digits_begin) k = 1;  // bare "S" is sigma
      const u32 kk = static_cast<u32>(k);
      tokens.push_back(Token::shift(negative ? m.neg(kk) : kk));
    } else {
      throw UsageError("bad word token at \"" + std::string(text.substr(i)) + "\"");
    }
  }
  return SigmaDeltaWord(m, std::move(tokens));
}

std::size_t SigmaDeltaWord::inversion_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(tokens_.begin(), tokens_.end(), [](const Token& t) { return t.kind == Token::Kind::Delta; }));
}

SigmaDeltaWord SigmaDeltaWord::normalized() const {
  std::vector<Token> out;
  for (const Token& t : tokens_) {
    if (t.kind == Token::Kind::Shift) {
      if (!out.empty() && out.back().kind == Token::Kind::Shift) {
        out.back().k = m_.add(out.back().k, t.k);
        if (out.back().k == 0) out.pop_back();
      } else if (t.k != 0) {
        out.push_back(t);
      }
    } else if (!out.empty() && out.back().kind == Token::Kind::Delta) {
      out.pop_back();
    } else {
      out.push_back(t);
    }
  }
  return SigmaDeltaWord(m_, std::move(out));
}

std::string SigmaDeltaWord::to_string() const {
  std::string out;
  for (const Token& t : tokens_) {
    if (!out.empty()) out += ' ';
    out += t.kind == Token::Kind::Delta ? std::string("D") : "S" + std::to_string(t.k);
  }
  return out;
}

Permutation word_eval(const SigmaDeltaWord& w) {
  const PrimeModulus m = w.modulus();
  std::vector<u32> images(m.value());
  for (u32 x = 0; x < m.value(); ++x) {
    u32 y = x;
    for (const auto& t : w.tokens()) {
      y = t.kind == SigmaDeltaWord::Token::Kind::Delta ? m.inv_or_zero(y) : m.add(y, t.k);
    }
    images[x] = y;
  }
  return Permutation::trusted(m, std::move(images));
}

CarlitzForm word_to_form(const SigmaDeltaWord& w) {
  const PrimeModulus m = w.modulus();
  std::vector<u32> shifts{0};
  for (const auto& t : w.tokens()) {
    if (t.kind == SigmaDeltaWord::Token::Kind::Delta) {
      shifts.push_back(0);
    } else {
      shifts.back() = m.add(shifts.back(), t.k);
    }
  }
  return CarlitzForm(m, 1, std::move(shifts));
}

SigmaDeltaWord lemma_word(PrimeModulus m) {
  if (m.value() < 5) throw UsageError("the (0 1)(2 3) word needs p >= 5");
  using T = SigmaDeltaWord::Token;
  const u32 back = m.value() - 1;
  // sigma^3 delta . sigma^-1 delta . (sigma delta)^3 . sigma^-1 delta, read
  // from the right.
  return SigmaDeltaWord(m, {T::delta(), T::shift(back), T::delta(), T::shift(1), T::delta(), T::shift(1),
                            T::delta(), T::shift(1), T::delta(), T::shift(back), T::delta(), T::shift(3)});
}

namespace {

constexpr u32 kNoParent = std::numeric_limits<u32>::max();

// Open-addressing set of fixed-width byte strings (permutations of at most
// 255 points) with per-state provenance.
class StateStore {
 public:
  struct Meta {
    u32 parent;  // kNoParent for roots
    u32 shift;   // shift applied after the inversion (or inner shift for roots)
    u32 lead;    // roots only
    u32 layer;
  };

  explicit StateStore(u32 width) : width_(width), table_(1024, 0) {}

  std::size_t size() const noexcept { return meta_.size(); }
  const std::uint8_t* key(u32 idx) const noexcept { return keys_.data() + std::size_t{idx} * width_; }
  const Meta& meta(u32 idx) const noexcept { return meta_[idx]; }

  std::optional<u32> find(const std::uint8_t* key) const noexcept {
    const std::size_t mask = table_.size() - 1;
    for (std::size_t slot = hash(key) & mask;; slot = (slot + 1) & mask) {
      const u32 entry = table_[slot];
      if (entry == 0) return std::nullopt;
      if (std::memcmp(this->key(entry - 1), key, width_) == 0) return entry - 1;
    }
  }

  // Returns the index and whether the key was new.
  std::pair<u32, bool> insert(const std::uint8_t* key, const Meta& meta) {
    if ((meta_.size() + 1) * 2 > table_.size()) grow();
    const std::size_t mask = table_.size() - 1;
    std::size_t slot = hash(key) & mask;
    for (;; slot = (slot + 1) & mask) {
      const u32 entry = table_[slot];
      if (entry == 0) break;
      if (std::memcmp(this->key(entry - 1), key, width_) == 0) return {entry - 1, false};
    }
    const u32 idx = static_cast<u32>(meta_.size());
    keys_.insert(keys_.end(), key, key + width_);
    meta_.push_back(meta);
    table_[slot] = idx + 1;
    return {idx, true};
  }

 private:
  std::size_t hash(const std::uint8_t* key) const noexcept {
    u64 h = 0x243F6A8885A308D3ull;
    std::size_t i = 0;
    for (; i + 8 <= width_; i += 8) {
      u64 chunk;
      std::memcpy(&chunk, key + i, 8);
      h = (h ^ chunk) * 0x9E3779B97F4A7C15ull;
      h ^= h >> 29;
    }
    for (; i < width_; ++i) {
      h = (h ^ key[i]) * 0x100000001B3ull;
    }
    h ^= h >> 32;
    return static_cast<std::size_t>(h * 0xD6E8FEB86659FD93ull >> 16);
  }

  void grow() {
    std::vector<u32> bigger(table_.size() * 2, 0);
    const std::size_t mask = bigger.size() - 1;
    for (u32 idx = 0; idx < meta_.size(); ++idx) {
      std::size_t slot = hash(key(idx)) & mask;
      while (bigger[slot] != 0) slot = (slot + 1) & mask;
      bigger[slot] = idx + 1;
    }
    table_.swap(bigger);
  }

  u32 width_;
  std::vector<std::uint8_t> keys_;
  std::vector<Meta> meta_;
  std::vector<u32> table_;
};

std::vector<u32> lead_values(PrimeModulus m, LeadSet leads) {
  switch (leads) {
    case LeadSet::One:
      return {1};
    case LeadSet::PlusMinusOne:
      return {1, m.value() - 1};
    case LeadSet::Any:
      break;
  }
  std::vector<u32> out;
  for (u32 a = 1; a < m.value(); ++a) out.push_back(a);
  return out;
}

void check_search_degree(PrimeModulus m) {
  if (m.value() > 255) throw UsageError("rank search supports p < 256");
}

// Upper bound on the states a ball of the given depth can hold.
u64 ball_estimate(u64 roots, u64 p, unsigned depth) {
  u64 total = 0;
  u64 layer = roots;
  for (unsigned k = 0; k <= depth; ++k) {
    total += layer;
    if (layer > std::numeric_limits<u64>::max() / p) return std::numeric_limits<u64>::max();
    layer *= p;
  }
  // Never more than |S_p| distinct states.
  u64 group = 1;
  for (u64 k = 2; k <= p; ++k) {
    if (group > std::numeric_limits<u64>::max() / k) return total;
    group *= k;
  }
  return std::min(total, group);
}

class ForwardBall {
 public:
  ForwardBall(PrimeModulus m, LeadSet leads)
      : m_(m), p_(m.value()), store_(m.value()), inv_(m.value()), scratch_(m.value()), next_(m.value()) {
    for (u32 x = 0; x < p_; ++x) inv_[x] = static_cast<std::uint8_t>(m.inv_or_zero(x));
    layer_begin_.push_back(0);
    for (u32 a : lead_values(m, leads)) {
      for (u32 b = 0; b < p_; ++b) {
        for (u32 x = 0; x < p_; ++x) scratch_[x] = static_cast<std::uint8_t>(m.add(m.mul(a, x), b));
        store_.insert(scratch_.data(), {kNoParent, b, a, 0});
      }
    }
    layer_begin_.push_back(static_cast<u32>(store_.size()));
  }

  unsigned depth() const noexcept { return static_cast<unsigned>(layer_begin_.size() - 2); }
  const StateStore& store() const noexcept { return store_; }

  // Expands the deepest layer. When `sink` is given, children are offered to
  // it instead of being stored; a true return stops the expansion.
  template <class Sink>
  bool expand(Sink&& sink, bool store_children) {
    const u32 begin = layer_begin_[layer_begin_.size() - 2];
    const u32 end = layer_begin_.back();
    const u32 layer = depth() + 1;
    for (u32 idx = begin; idx < end; ++idx) {
      const std::uint8_t* s = store_.key(idx);
      for (u32 x = 0; x < p_; ++x) scratch_[x] = inv_[s[x]];
      for (u32 c = 0; c < p_; ++c) {
        for (u32 x = 0; x < p_; ++x) {
          const u32 y = scratch_[x] + c;
          next_[x] = static_cast<std::uint8_t>(y >= p_ ? y - p_ : y);
        }
        if (sink(next_.data(), idx, c)) return true;
        if (store_children) store_.insert(next_.data(), {idx, c, 0, layer});
      }
      // store_.key(idx) may move when the store grows; re-fetch next round.
    }
    if (store_children) layer_begin_.push_back(static_cast<u32>(store_.size()));
    return false;
  }

  std::pair<u32, u32> layer_range(unsigned k) const { return {layer_begin_[k], layer_begin_[k + 1]}; }

  CarlitzForm form_of(u32 idx) const {
    std::vector<u32> outer;
    while (store_.meta(idx).parent != kNoParent) {
      outer.push_back(store_.meta(idx).shift);
      idx = store_.meta(idx).parent;
    }
    std::vector<u32> shifts{store_.meta(idx).shift};
    shifts.insert(shifts.end(), outer.rbegin(), outer.rend());
    return CarlitzForm(m_, store_.meta(idx).lead, std::move(shifts));
  }

 private:
  PrimeModulus m_;
  u32 p_;
  StateStore store_;
  std::vector<std::uint8_t> inv_;
  std::vector<std::uint8_t> scratch_;
  std::vector<std::uint8_t> next_;
  std::vector<u32> layer_begin_;
};

std::vector<std::uint8_t> to_key(const Permutation& f) {
  std::vector<std::uint8_t> key(f.degree());
  for (u32 x = 0; x < f.degree(); ++x) key[x] = static_cast<std::uint8_t>(f(x));
  return key;
}

}  // namespace

RankResult rank_search(const Permutation& target, unsigned max_n, LeadSet leads, const RankSearchOptions& opts) {
  const PrimeModulus m = target.modulus();
  check_search_degree(m);
  const u32 p = m.value();
  const bool meet_in_middle = max_n >= 5;
  const unsigned forward_depth = meet_in_middle ? (max_n + 1) / 2 : (max_n == 0 ? 0 : max_n - 1);
  const u64 roots = lead_values(m, leads).size() * u64{p};
  const u64 estimate = ball_estimate(roots, p, forward_depth);
  if (estimate > opts.state_budget) throw BudgetExceeded("rank search", estimate, opts.state_budget);

  const std::vector<std::uint8_t> target_key = to_key(target);
  ForwardBall ball(m, leads);
  RankResult result;

  auto found_in_ball = [&]() -> bool {
    if (auto idx = ball.store().find(target_key.data())) {
      result.rank = ball.store().meta(*idx).layer;
      result.witness = ball.form_of(*idx);
      result.certified_exact = true;
      return true;
    }
    return false;
  };
  auto no_sink = [](const std::uint8_t*, u32, u32) { return false; };

  if (found_in_ball()) {
    result.states_explored = ball.store().size();
    return result;
  }
  for (unsigned k = 1; k <= forward_depth; ++k) {
    ball.expand(no_sink, true);
    if (found_in_ball()) {
      result.states_explored = ball.store().size();
      return result;
    }
  }

  if (!meet_in_middle) {
    if (max_n > forward_depth) {
      ball.expand(
          [&](const std::uint8_t* key, u32 parent, u32 c) {
            if (std::memcmp(key, target_key.data(), p) != 0) return false;
            result.rank = max_n;
            result.witness = ball.form_of(parent).then_invert_and_shift(c);
            result.certified_exact = true;
            return true;
          },
          false);
    }
    result.states_explored = ball.store().size();
    return result;
  }

  // Backward frontier: g -> delta o (x - c) o g, so that a hit h at depth m
  // gives target = T_{c_1} delta ... T_{c_m} delta h.
  StateStore back(p);
  std::vector<std::uint8_t> inv(p), next(p), current(p);
  for (u32 x = 0; x < p; ++x) inv[x] = static_cast<std::uint8_t>(m.inv_or_zero(x));
  back.insert(target_key.data(), {kNoParent, 0, 0, 0});
  u32 begin = 0;
  for (unsigned depth = 1; depth + forward_depth <= max_n; ++depth) {
    const u32 end = static_cast<u32>(back.size());
    for (u32 idx = begin; idx < end; ++idx) {
      std::memcpy(current.data(), back.key(idx), p);
      for (u32 c = 0; c < p; ++c) {
        for (u32 x = 0; x < p; ++x) next[x] = inv[m.sub(current[x], c)];
        const auto [child, fresh] = back.insert(next.data(), {idx, c, 0, depth});
        if (!fresh) continue;
        if (auto hit = ball.store().find(next.data())) {
          CarlitzForm form = ball.form_of(*hit);
          for (u32 j = child; back.meta(j).parent != kNoParent; j = back.meta(j).parent) {
            form = form.then_invert_and_shift(back.meta(j).shift);
          }
          result.rank = ball.store().meta(*hit).layer + depth;
          result.witness = std::move(form);
          result.certified_exact = true;
          result.states_explored = ball.store().size() + back.size();
          return result;
        }
      }
    }
    begin = end;
  }
  result.states_explored = ball.store().size() + back.size();
  return result;
}

RankResult carlitz_rank(const Permutation& target, unsigned max_n, const RankSearchOptions& opts) {
  return rank_search(target, max_n, LeadSet::Any, opts);
}

RankResult weak_carlitz_rank(const Permutation& target, unsigned max_n, LeadSet leads, const RankSearchOptions& opts) {
  return rank_search(target, max_n, leads, opts);
}

RankCensus rank_census(PrimeModulus m, LeadSet leads, unsigned max_layers, const RankSearchOptions& opts) {
  check_search_degree(m);
  ForwardBall ball(m, leads);
  auto no_sink = [](const std::uint8_t*, u32, u32) { return false; };
  unsigned k = 0;
  while (k < max_layers) {
    const auto [begin, end] = ball.layer_range(k);
    if (begin == end) break;
    if (ball.store().size() + u64{end - begin} * m.value() > opts.state_budget) {
      throw BudgetExceeded("rank census", ball.store().size() + u64{end - begin} * m.value(), opts.state_budget);
    }
    ball.expand(no_sink, true);
    ++k;
  }
  RankCensus census;
  const StateStore& store = ball.store();
  census.layers = k;
  for (u32 idx = 0; idx < store.size(); ++idx) {
    const std::uint8_t* key = store.key(idx);
    census.perms.emplace_back(key, key + m.value());
    census.ranks.push_back(store.meta(idx).layer);
  }
  return census;
}

}  // namespace ppgen
