#pragma once

#include "fraclim/badic.hpp"
#include "fraclim/limit/certified.hpp"
#include "fraclim/seq/engine.hpp"

#include <memory>
#include <vector>

namespace fraclim {

// The remainder a(x) = sqrt(x) lambda(x) - rho(floor x) of the abelian
// complexity of the Rudin-Shapiro word, through its 4-ary digit series
//   a(x) = sum_j d(x_j) a_j(x) 2^-j.
class RhoLimit {
 public:
  RhoLimit();
  explicit RhoLimit(std::shared_ptr<seq::SequenceEngine> engine);

  seq::SequenceEngine& engine() { return *engine_; }
  std::shared_ptr<seq::SequenceEngine> engine_ptr() const { return engine_; }

  // -1 when 4^j x < 1, else Delta rho(floor(4^j x) - 1)
  int a_coeff(const BAdicPoint& x, unsigned j);
  // |y - 1|
  static int digit_weight(int y);
  Rational f_n(const BAdicPoint& x, unsigned n);
  // f_1(x) .. f_nmax(x)
  std::vector<Rational> partial_sums(const BAdicPoint& x, unsigned nmax);

  // x = z/4^k in [0,1]: f_k(x) plus the tail 2^-k (z >= 1)
  Rational a_exact(const BAdicPoint& x);
  CertifiedValue a_certified(const BAdicPoint& x, const Rational& eps);
  // lambda(x) = (a(x) + rho(floor x)) / sqrt(x), x in (0,1]
  CertifiedValue lambda(const BAdicPoint& x, const Rational& eps);

  // Delta rho(4n - 1) = 1 for 1 <= n <= N; a_exact runs it once with N = 10^6
  bool verify_tail_identity(std::uint64_t N);
  void set_gate_size(std::uint64_t N) { gate_n_ = N; }

 private:
  void gate();
  void check_point(const BAdicPoint& x) const;

  std::shared_ptr<seq::SequenceEngine> engine_;
  std::uint64_t gate_n_ = 1000000;
  bool gate_passed_ = false;
};

}  // namespace fraclim
