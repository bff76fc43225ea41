#pragma once

#include "fraclim/badic.hpp"
#include "fraclim/limit/certified.hpp"
#include "fraclim/limit/linalg.hpp"
#include "fraclim/seq/engine.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fraclim {

// |s(bn+i) - b^alpha s(n)| <= C n^beta on 1 <= n <= verified_n
struct QLProfile {
  int base = 2;
  Rational alpha;
  Rational beta;
  Rational C;
  BigInt verified_n = 0;
  Rational C0 = 0;  // max_i |s(i) - b^alpha s(0)|, the n = 0 terms

  Rational c_tail() const { return C0 > C ? C0 : C; }
  void validate() const;
};

// lim_m s(z b^m) / B^m as a linear functional of the window at z. It exists
// and is exact when the digit-0 window map divided by B has eigenvalue 1
// semisimple and every other eigenvalue strictly inside the unit disk.
class OrbitLimit {
 public:
  OrbitLimit(const seq::SequenceEngine& engine, const BigInt& B);

  bool available() const { return available_; }
  const std::string& reason() const { return reason_; }
  std::size_t multiplicity_one() const { return mult_one_; }
  const linalg::Vector& charpoly() const { return charpoly_; }

  // functional = numerators / denominator, last entry multiplies the constant 1
  const std::vector<BigInt>& numerators() const { return num_; }
  const BigInt& denominator() const { return den_; }
  Rational limit(const seq::Window& w) const;
  // numerator of limit over denominator(); throws OverflowError past 128 bits
  __int128 limit_numerator(const seq::Window& w) const;
  bool small() const { return small_; }

 private:
  bool available_ = false;
  std::string reason_;
  std::size_t mult_one_ = 0;
  linalg::Vector charpoly_;
  std::vector<BigInt> num_;
  BigInt den_ = 1;
  std::vector<std::int64_t> num_small_;
  bool small_ = false;
};

// Series evaluation of a_s(x) = x^alpha lambda_s(x) - s(floor x) for a
// quasi-linear sequence, and of lambda_s itself.
class ProfileLimit {
 public:
  ProfileLimit(std::shared_ptr<seq::SequenceEngine> engine, QLProfile profile);

  seq::SequenceEngine& engine() { return *engine_; }
  std::shared_ptr<seq::SequenceEngine> engine_ptr() const { return engine_; }
  const QLProfile& profile() const { return profile_; }
  int base() const { return profile_.base; }
  // b^alpha when it is an integer
  const std::optional<BigInt>& B() const { return B_; }
  // null when the exact orbit path is unavailable
  const OrbitLimit* orbit();

  // c(j,x) = s(floor b^j x) - b^alpha s(floor b^(j-1) x)
  Interval c_term(const BAdicPoint& x, unsigned j);
  CertifiedValue g_n(const BAdicPoint& x, unsigned n, bool demand_exact = false);
  Rational g_n_exact(const BAdicPoint& x, unsigned n);
  // upper bound on |a_s(x) - g_n(x)| for x in [0,1]
  Rational tail_bound(unsigned n) const;

  CertifiedValue a_s_certified(const BAdicPoint& x, const Rational& eps);
  Rational a_s_exact(const BAdicPoint& x);
  // exact when possible, certified otherwise
  CertifiedValue a_s(const BAdicPoint& x, const Rational& eps);
  // lambda_s(x) = (a_s(x) + s(floor x)) / x^alpha, x in (0,1]
  CertifiedValue lambda_s(const BAdicPoint& x, const Rational& eps);

 private:
  Interval B_interval(unsigned bits) const;
  void check_point(const BAdicPoint& x) const;

  std::shared_ptr<seq::SequenceEngine> engine_;
  QLProfile profile_;
  std::optional<BigInt> B_;
  std::optional<OrbitLimit> orbit_;
  bool orbit_tried_ = false;
};

}  // namespace fraclim
