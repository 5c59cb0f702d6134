// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>
#include <mpfr.h>

namespace qseries {

/// Nonnegative magnitude `man * 2^exp` with a 53-bit mantissa and an
/// unbounded exponent. Used for ball radii and for rigorous upper/lower
/// bounds on absolute values; every operation rounds in the named
/// direction, so `*_up` results never underestimate and `*_down` results
/// never overestimate the exact value.
class Mag {
 public:
  constexpr Mag() = default;

  static Mag from_double(double x);  // exact: |x|
  static Mag pow2(std::int64_t e);
  static Mag upper_abs(mpfr_srcptr x);
  static Mag lower_abs(mpfr_srcptr x);
  /// 2^(EXP(x) - prec(x)); bounds the error of any correctly rounded
  /// operation whose result is x. Zero for x == 0.
  static Mag ulp(mpfr_srcptr x);

  bool is_zero() const { return man_ == 0.0; }
  /// Binary exponent e with value in [2^(e-1), 2^e); meaningless for zero.
  std::int64_t exponent() const { return exp_; }
  double to_double() const;  // rounded up, may overflow to +inf
  double log2() const;       // approximate, -inf for zero
  mpq_class to_mpq() const;  // exact
  std::string to_string() const;

  friend Mag add_up(Mag a, Mag b);
  friend Mag add_down(Mag a, Mag b);
  friend Mag mul_up(Mag a, Mag b);
  friend Mag mul_down(Mag a, Mag b);
  friend Mag div_up(Mag a, Mag b);    // b must be nonzero
  friend Mag div_down(Mag a, Mag b);  // b must be nonzero
  /// Lower bound of max(a - b, 0).
  friend Mag sub_down(Mag a, Mag b);
  friend Mag sqrt_up(Mag a);
  friend Mag sqrt_down(Mag a);
  friend Mag hypot_up(Mag a, Mag b);
  friend Mag hypot_down(Mag a, Mag b);

  friend Mag operator+(Mag a, Mag b) { return add_up(a, b); }
  friend Mag operator*(Mag a, Mag b) { return mul_up(a, b); }
  Mag& operator+=(Mag b) { return *this = add_up(*this, b); }
  Mag& operator*=(Mag b) { return *this = mul_up(*this, b); }

  friend int compare(Mag a, Mag b);
  friend bool operator<(Mag a, Mag b) { return compare(a, b) < 0; }
  friend bool operator<=(Mag a, Mag b) { return compare(a, b) <= 0; }
  friend bool operator>(Mag a, Mag b) { return compare(a, b) > 0; }
  friend bool operator>=(Mag a, Mag b) { return compare(a, b) >= 0; }
  friend bool operator==(Mag a, Mag b) { return compare(a, b) == 0; }

 private:
  enum class Dir { up, down };
  static Mag make(double m, std::int64_t e, Dir dir);

  double man_ = 0.0;  // 0 or in [0.5, 1)
  std::int64_t exp_ = 0;
};

inline Mag min(Mag a, Mag b) { return a <= b ? a : b; }
inline Mag max(Mag a, Mag b) { return a >= b ? a : b; }

}  // namespace qseries
