#pragma once

#include "fraclim/badic.hpp"
#include "fraclim/limit/profile.hpp"
#include "fraclim/limit/rho.hpp"
#include "fraclim/seq/engine.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace fraclim {

enum class CoverKind { F, E };
std::string to_string(CoverKind k);
CoverKind parse_cover_kind(std::string_view text);

class DegenerateProfile : public Error {
 public:
  using Error::Error;
};

// floor(3 / (b^(alpha-beta) - 1)) + 1, with the floor decided exactly
BigInt d4(const QLProfile& profile);

// A remainder graph (a for rho, a_s for a quasi-linear profile) together with
// the half-height law of its rectangle cover. Midlines and exact values use
// integer windows of the underlying engine; b^alpha must be an integer.
class Instance {
 public:
  static Instance rho();
  static Instance profile(std::string id, std::shared_ptr<seq::SequenceEngine> engine, QLProfile profile);
  // rho, tm_sum, rs_sum, tm_double_sum, zero; profiles are verified on 1..verify_n
  static Instance builtin(std::string_view id, std::uint64_t verify_n = 100000);

  const std::string& id() const { return id_; }
  CoverKind kind() const { return kind_; }
  int base() const { return engine_->base(); }
  const BigInt& B() const { return B_; }
  seq::SequenceEngine& engine() { return *engine_; }
  std::shared_ptr<seq::SequenceEngine> engine_ptr() const { return engine_; }
  const QLProfile& profile() const { return limit_->profile(); }
  ProfileLimit& limit() { return *limit_; }
  RhoLimit& rho_limit();
  const OrbitLimit& orbit() const { return *orbit_; }

  // D_4 (E covers); 2 for the F law written as 2 * 2^-n
  const Rational& height_factor() const { return factor_; }
  void set_height_factor(const Rational& f) { factor_ = f; }
  // ratio^n with ratio = b^-(alpha-beta)
  const Rational& height_ratio() const { return ratio_; }
  // alpha - beta
  const Rational& vertical_exponent() const { return vexp_; }
  // half-height of level-n rectangles, equal to the truncation slack at level n
  Rational half_height(unsigned n) const;
  bool has_rho_envelope() const { return kind_ == CoverKind::F; }

  // f_n(k/b^n) or g_n(k/b^n), by their series definitions
  Rational midline_definition(unsigned n, const BigInt& k);
  // s(k)/B^n - s(0), the telescoped form
  Rational midline(unsigned n, const BigInt& k);
  // a / a_s at a b-adic point of [0,1]
  Rational value(const BAdicPoint& x);
  CertifiedValue lambda(const BAdicPoint& x, const Rational& eps);

  // limit numerator over orbit().denominator() at index z (0 at z = 0)
  __int128 limit_numerator(const seq::Window& w) const;
  std::int64_t s0() const { return s0_; }

 private:
  Instance() = default;

  std::string id_;
  CoverKind kind_ = CoverKind::E;
  std::shared_ptr<seq::SequenceEngine> engine_;
  std::shared_ptr<ProfileLimit> limit_;
  std::shared_ptr<RhoLimit> rho_;
  std::shared_ptr<OrbitLimit> orbit_;
  BigInt B_;
  Rational factor_;
  Rational ratio_;
  Rational vexp_;
  std::int64_t s0_ = 0;
};

}  // namespace fraclim
