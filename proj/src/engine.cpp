#include "fraclim/seq/engine.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <limits>

namespace fraclim::seq {

namespace {

constexpr std::uint64_t kFlatLimit = 1ull << 22;

std::int64_t mul_add(std::int64_t acc, std::int64_t coef, std::int64_t v) {
  std::int64_t prod;
  if (__builtin_mul_overflow(coef, v, &prod) || __builtin_add_overflow(acc, prod, &acc))
    throw OverflowError("sequence value exceeds 64 bits");
  return acc;
}

}  // namespace

SequenceEngine::SequenceEngine(RecurrenceSpec spec) : spec_(std::move(spec)) {
  const std::size_t S = spec_.sequences.size();
  b_ = static_cast<std::uint64_t>(spec_.base);
  threshold_ = b_ * static_cast<std::uint64_t>(spec_.n_min);
  small_init_.resize(S);
  for (std::size_t s = 0; s < S; ++s) {
    for (const auto& [idx, v] : spec_.initials[s]) {
      if (static_cast<std::uint64_t>(idx) >= threshold_) has_overrides_ = true;
      if (fits_i64(v)) small_init_[s][static_cast<std::uint64_t>(idx)] = to_i64(v);
    }
  }
  flat_.resize(S);
  spill_.resize(S);
  big_.resize(S);

  const auto maxshift = static_cast<std::size_t>(spec_.max_shift());
  const auto b = static_cast<std::size_t>(b_);
  width_ = 1;
  while ((width_ + b - 2) / b + maxshift > width_ - 1) ++width_;

  plan_.assign(b, std::vector<PlanEntry>(S * width_));
  for (std::size_t d = 0; d < b; ++d) {
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t o = 0; o < width_; ++o) {
        std::size_t rel = d + o;
        std::size_t qoff = rel / b;
        const Rule& r = spec_.rules[s][rel % b];
        PlanEntry e;
        e.start = static_cast<std::uint32_t>(plan_terms_.size());
        e.constant = r.constant;
        for (const auto& t : r.terms) {
          std::size_t off = qoff + static_cast<std::size_t>(t.shift);
          plan_terms_.push_back({static_cast<std::uint32_t>(t.seq * width_ + off), t.coef});
        }
        e.count = static_cast<std::uint32_t>(plan_terms_.size() - e.start);
        plan_[d][s * width_ + o] = e;
      }
    }
  }
}

void SequenceEngine::store_small(std::size_t s, std::uint64_t n, std::int64_t v) {
  if (n < kFlatLimit) {
    Flat& f = flat_[s];
    if (n >= f.val.size()) {
      std::size_t sz = std::max<std::size_t>(f.val.size() * 2, 1024);
      while (sz <= n) sz *= 2;
      sz = std::min<std::size_t>(sz, kFlatLimit);
      f.val.resize(sz, 0);
      f.known.resize(sz, 0);
    }
    f.val[n] = v;
    f.known[n] = 1;
  } else {
    spill_[s][n] = v;
  }
}

std::int64_t SequenceEngine::eval_small(std::size_t s, std::uint64_t n) {
  if (n < kFlatLimit) {
    const Flat& f = flat_[s];
    if (n < f.known.size() && f.known[n]) return f.val[n];
  } else {
    auto it = spill_[s].find(n);
    if (it != spill_[s].end()) return it->second;
  }
  std::int64_t v = compute_small(s, n);
  store_small(s, n, v);
  return v;
}

std::int64_t SequenceEngine::compute_small(std::size_t s, std::uint64_t n) {
  auto init = small_init_[s].find(n);
  if (init != small_init_[s].end()) return init->second;
  if (spec_.initials[s].count(static_cast<std::int64_t>(n)))
    throw OverflowError("initial value exceeds 64 bits");
  if (n < threshold_)
    throw Error(fmt::format("{}({}) is below the rule range and has no initial value", spec_.sequences[s], n));
  std::uint64_t q = n / b_;
  const Rule& r = spec_.rules[s][n % b_];
  std::int64_t acc = r.constant;
  for (const auto& t : r.terms) {
    std::uint64_t arg = q + static_cast<std::uint64_t>(t.shift);
    acc = mul_add(acc, t.coef, eval_small(t.seq, arg));
  }
  return acc;
}

BigInt SequenceEngine::eval(std::size_t s, const BigInt& n) {
  if (sgn(n) < 0) throw DomainError("negative sequence index " + n.get_str());
  if (s >= sequence_count()) throw DomainError("no such sequence");
  auto it = big_[s].find(n);
  if (it != big_[s].end()) return it->second;
  if (fits_u64(n)) {
    try {
      return BigInt(static_cast<long>(eval_small(s, to_u64(n))));
    } catch (const OverflowError&) {
    }
  }
  BigInt v = compute_big(s, n);
  big_[s].emplace(n, v);
  return v;
}

BigInt SequenceEngine::compute_big(std::size_t s, const BigInt& n) {
  if (n <= BigInt(std::numeric_limits<long>::max())) {
    auto init = spec_.initials[s].find(n.get_si());
    if (init != spec_.initials[s].end()) return init->second;
  }
  if (n < BigInt(static_cast<unsigned long>(threshold_)))
    throw Error(fmt::format("{}({}) is below the rule range and has no initial value", spec_.sequences[s], n.get_str()));
  BigInt q;
  unsigned long res = mpz_fdiv_q_ui(q.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(b_));
  const Rule& r = spec_.rules[s][res];
  BigInt acc = static_cast<long>(r.constant);
  for (const auto& t : r.terms) acc += static_cast<long>(t.coef) * eval(t.seq, q + static_cast<long>(t.shift));
  return acc;
}

BigInt SequenceEngine::delta(const BigInt& n) { return eval(n + 1) - eval(n); }

Window SequenceEngine::window(std::uint64_t n) {
  Window w;
  w.index = n;
  w.v.resize(window_size());
  for (std::size_t s = 0; s < sequence_count(); ++s)
    for (std::size_t o = 0; o < width_; ++o) w.v[s * width_ + o] = eval_small(s, n + o);
  return w;
}

void SequenceEngine::child(const Window& parent, int digit, Window& out) {
  std::uint64_t idx;
  if (__builtin_mul_overflow(parent.index, b_, &idx) ||
      __builtin_add_overflow(idx, static_cast<std::uint64_t>(digit), &idx))
    throw OverflowError("window index exceeds 64 bits");
  out.index = idx;
  out.v.resize(window_size());
  if (parent.index < static_cast<std::uint64_t>(spec_.n_min)) {
    for (std::size_t s = 0; s < sequence_count(); ++s)
      for (std::size_t o = 0; o < width_; ++o) out.v[s * width_ + o] = eval_small(s, idx + o);
    return;
  }
  const auto& plan = plan_[static_cast<std::size_t>(digit)];
  const std::int64_t* pv = parent.v.data();
  for (std::size_t k = 0; k < plan.size(); ++k) {
    const PlanEntry& e = plan[k];
    std::int64_t acc = e.constant;
    for (std::uint32_t j = 0; j < e.count; ++j) {
      const PlanTerm& t = plan_terms_[e.start + j];
      acc = mul_add(acc, t.coef, pv[t.pos]);
    }
    out.v[k] = acc;
  }
  if (has_overrides_) {
    for (std::size_t s = 0; s < sequence_count(); ++s)
      for (std::size_t o = 0; o < width_; ++o) {
        auto it = small_init_[s].find(idx + o);
        if (it != small_init_[s].end()) out.v[s * width_ + o] = it->second;
      }
  }
}

AffineMap SequenceEngine::window_map(int digit) const {
  const std::size_t W = window_size();
  AffineMap m;
  m.M.assign(W, std::vector<std::int64_t>(W, 0));
  m.c.assign(W, 0);
  const auto& plan = plan_[static_cast<std::size_t>(digit)];
  for (std::size_t k = 0; k < W; ++k) {
    m.c[k] = plan[k].constant;
    for (std::uint32_t j = 0; j < plan[k].count; ++j) {
      const PlanTerm& t = plan_terms_[plan[k].start + j];
      m.M[k][t.pos] += t.coef;
    }
  }
  return m;
}

std::size_t SequenceEngine::memo_entries() const {
  std::size_t n = 0;
  for (std::size_t s = 0; s < sequence_count(); ++s) {
    n += static_cast<std::size_t>(std::count(flat_[s].known.begin(), flat_[s].known.end(), 1));
    n += spill_[s].size() + big_[s].size();
  }
  return n;
}

void SequenceEngine::clear_memo() {
  for (std::size_t s = 0; s < sequence_count(); ++s) {
    flat_[s] = Flat{};
    spill_[s].clear();
    big_[s].clear();
  }
}

}  // namespace fraclim::seq
