// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include <gmpxx.h>

namespace qseries {

/// Exact complex rational re + im*i. Both parts are kept in lowest terms
/// with positive denominators (GMP canonical form). Real rationals are the
/// im == 0 subset.
class ExactRational {
 public:
  ExactRational() = default;
  ExactRational(long v) : re_(v) {}  // NOLINT: implicit from integers
  explicit ExactRational(mpq_class re, mpq_class im = 0);
  static ExactRational fraction(long num, long den);

  /// Accepts "3/7", "-0.125", "2", "0.5+0.25i", "1/3-2i", "i", "-0.5i".
  static ExactRational parse(std::string_view text);

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }
  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  mpq_class norm() const { return re_ * re_ + im_ * im_; }  // |z|^2
  double abs_approx() const;

  ExactRational conj() const { return ExactRational(re_, -im_); }

  ExactRational operator-() const { return ExactRational(-re_, -im_); }
  friend ExactRational operator+(const ExactRational& a, const ExactRational& b);
  friend ExactRational operator-(const ExactRational& a, const ExactRational& b);
  friend ExactRational operator*(const ExactRational& a, const ExactRational& b);
  /// Throws PoleError on division by zero.
  friend ExactRational operator/(const ExactRational& a, const ExactRational& b);
  ExactRational& operator+=(const ExactRational& b) { return *this = *this + b; }
  ExactRational& operator-=(const ExactRational& b) { return *this = *this - b; }
  ExactRational& operator*=(const ExactRational& b) { return *this = *this * b; }
  ExactRational& operator/=(const ExactRational& b) { return *this = *this / b; }
  friend bool operator==(const ExactRational& a, const ExactRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  /// Exact decimal where the denominator is 2^a 5^b, else "p/q".
  std::string to_string() const;

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

ExactRational pow(const ExactRational& x, long n);

}  // namespace qseries
