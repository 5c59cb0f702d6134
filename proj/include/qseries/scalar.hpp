// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <variant>

#include "qseries/ball.hpp"
#include "qseries/exact.hpp"

namespace qseries {

/// Either an exact Gaussian rational or a complex ball.
///
/// Arithmetic between two exact values stays exact. As soon as one operand
/// is a ball the exact operand is rounded at that ball's precision.
class Scalar {
 public:
  Scalar() : v_(ExactRational()) {}
  Scalar(long v) : v_(ExactRational(v)) {}  // NOLINT
  Scalar(ExactRational v) : v_(std::move(v)) {}  // NOLINT
  Scalar(Ball v) : v_(std::move(v)) {}  // NOLINT

  bool is_exact() const { return std::holds_alternative<ExactRational>(v_); }
  const ExactRational& exact() const { return std::get<ExactRational>(v_); }
  const Ball& ball() const { return std::get<Ball>(v_); }
  Ball to_ball(Precision p) const;

  /// Rigorous bounds on the modulus.
  Mag abs_upper() const;
  Mag abs_lower() const;
  bool is_exact_zero() const { return is_exact() && exact().is_zero(); }
  bool may_be_zero() const;
  /// Radius (zero for exact values).
  Mag radius() const;

  /// True when `x` is certainly enclosed (exact equality for exact values).
  bool contains(const ExactRational& x) const;
  double re_approx() const;
  double im_approx() const;
  std::string to_string(int digits = 20) const;

  Scalar operator-() const;
  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  /// Throws PoleError on exact zero, PrecisionError on a ball containing zero.
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
  Scalar& operator*=(const Scalar& b) { return *this = *this * b; }
  Scalar& operator/=(const Scalar& b) { return *this = *this / b; }

 private:
  std::variant<ExactRational, Ball> v_;
};

Scalar pow(const Scalar& x, long n);

/// Principal square root. Exact when `x` is the square of a Gaussian
/// rational, otherwise a ball at precision `p`.
Scalar sqrt(const Scalar& x, Precision p);

/// Bounds on |x| for an exact value.
Mag exact_abs_upper(const ExactRational& x);
Mag exact_abs_lower(const ExactRational& x);

}  // namespace qseries
