// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include <mpfr.h>

#include "qseries/exact.hpp"
#include "qseries/mag.hpp"

namespace qseries {

/// Working precision in bits.
struct Precision {
  long bits = 128;
  friend bool operator==(Precision, Precision) = default;
  friend auto operator<=>(Precision, Precision) = default;
};

/// Owning RAII wrapper around one mpfr_t.
class Real {
 public:
  explicit Real(long prec);
  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  long prec() const { return mpfr_get_prec(v_); }

 private:
  mpfr_t v_;
};

/// Complex ball: a midpoint at P-bit precision and an absolute radius.
/// Every operation returns a ball that contains the exact result for every
/// choice of points in the operand balls.
class Ball {
 public:
  explicit Ball(Precision prec = {});
  Ball(const ExactRational& v, Precision prec);
  static Ball from_double(double re, double im, Precision prec);

  Precision precision() const { return {re_.prec()}; }
  mpfr_srcptr re() const { return re_.get(); }
  mpfr_srcptr im() const { return im_.get(); }
  const Mag& rad() const { return rad_; }

  /// Widen the radius by `err`.
  Ball& add_error(Mag err) {
    rad_ += err;
    return *this;
  }

  Mag mid_abs_upper() const;
  Mag mid_abs_lower() const;
  Mag abs_upper() const { return add_up(mid_abs_upper(), rad_); }
  Mag abs_lower() const { return sub_down(mid_abs_lower(), rad_); }
  bool contains_zero() const { return mid_abs_lower() <= rad_; }
  bool is_exact() const { return rad_.is_zero(); }

  /// Exact containment tests (done in rational arithmetic).
  bool contains(const ExactRational& x) const;
  bool contains(const Ball& inner) const;
  friend bool overlaps(const Ball& a, const Ball& b);

  double re_approx() const { return mpfr_get_d(re_.get(), MPFR_RNDN); }
  double im_approx() const { return mpfr_get_d(im_.get(), MPFR_RNDN); }
  ExactRational mid_exact() const;
  /// Midpoint with `digits` significant digits, e.g. "1.25+3.5e-2i".
  std::string mid_string(int digits = 20) const;
  std::string to_string(int digits = 20) const;

  Ball operator-() const;
  friend Ball operator+(const Ball& a, const Ball& b);
  friend Ball operator-(const Ball& a, const Ball& b);
  friend Ball operator*(const Ball& a, const Ball& b);
  /// Throws PrecisionError when `b` contains zero.
  friend Ball operator/(const Ball& a, const Ball& b);
  Ball& operator+=(const Ball& b) { return *this = *this + b; }
  Ball& operator-=(const Ball& b) { return *this = *this - b; }
  Ball& operator*=(const Ball& b) { return *this = *this * b; }
  Ball& operator/=(const Ball& b) { return *this = *this / b; }

  /// Principal square root of the midpoint, continued analytically over the
  /// ball. Throws PrecisionError when the ball contains zero.
  friend Ball sqrt(const Ball& a);

 private:
  Real re_;
  Real im_;
  Mag rad_;
};

Ball pow(const Ball& x, long n);
inline Ball one(Precision p) { return Ball(ExactRational(1), p); }

}  // namespace qseries
