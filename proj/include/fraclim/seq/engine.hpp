#pragma once

#include "fraclim/numeric.hpp"
#include "fraclim/seq/spec.hpp"

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace fraclim::seq {

// Values of every sequence of the system at indices index .. index+width-1,
// laid out as v[seq * width + offset].
struct Window {
  std::uint64_t index = 0;
  std::vector<std::int64_t> v;
};

// child window = M * parent + c
struct AffineMap {
  std::vector<std::vector<std::int64_t>> M;
  std::vector<std::int64_t> c;
};

class SequenceEngine {
 public:
  explicit SequenceEngine(RecurrenceSpec spec);

  const RecurrenceSpec& spec() const { return spec_; }
  int base() const { return spec_.base; }
  std::size_t sequence_count() const { return spec_.sequences.size(); }
  const std::string& name() const { return spec_.name; }

  BigInt eval(const BigInt& n) { return eval(0, n); }
  BigInt eval(std::size_t seq, const BigInt& n);
  // 64-bit path; throws OverflowError when a value leaves int64
  std::int64_t eval_small(std::uint64_t n) { return eval_small(0, n); }
  std::int64_t eval_small(std::size_t seq, std::uint64_t n);
  BigInt delta(const BigInt& n);

  std::size_t window_width() const { return width_; }
  std::size_t window_size() const { return width_ * sequence_count(); }
  Window window(std::uint64_t n);
  // window at b*parent.index + digit
  void child(const Window& parent, int digit, Window& out);
  std::int64_t at(const Window& w, std::size_t seq, std::size_t offset = 0) const {
    return w.v[seq * width_ + offset];
  }
  AffineMap window_map(int digit) const;
  // initial values at indices where rules would otherwise apply
  bool has_overrides() const { return has_overrides_; }

  std::size_t memo_entries() const;
  void clear_memo();

 private:
  struct PlanEntry {
    std::uint32_t start = 0;
    std::uint32_t count = 0;
    std::int64_t constant = 0;
  };
  struct PlanTerm {
    std::uint32_t pos = 0;
    std::int64_t coef = 0;
  };
  struct Flat {
    std::vector<std::int64_t> val;
    std::vector<std::uint8_t> known;
  };

  std::int64_t compute_small(std::size_t seq, std::uint64_t n);
  BigInt compute_big(std::size_t seq, const BigInt& n);
  void store_small(std::size_t seq, std::uint64_t n, std::int64_t v);

  RecurrenceSpec spec_;
  std::uint64_t b_;
  std::uint64_t threshold_;  // b * n_min: rules apply at and above
  std::size_t width_ = 1;
  bool has_overrides_ = false;
  std::vector<std::unordered_map<std::uint64_t, std::int64_t>> small_init_;
  std::vector<Flat> flat_;
  std::vector<std::unordered_map<std::uint64_t, std::int64_t>> spill_;
  std::vector<std::unordered_map<BigInt, BigInt, BigIntHash>> big_;
  std::vector<std::vector<PlanEntry>> plan_;  // [digit][seq*width+offset]
  std::vector<PlanTerm> plan_terms_;
};

}  // namespace fraclim::seq
