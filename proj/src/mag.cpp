// SPDX-License-Identifier: Apache-2.0
#include "qseries/mag.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace qseries {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Exponent gaps beyond this make the smaller addend invisible in 53 bits.
constexpr std::int64_t kMaxGap = 900;

}  // namespace

Mag Mag::make(double m, std::int64_t e, Dir dir) {
  if (m == 0.0) return {};
  m = std::nextafter(m, dir == Dir::up ? kInf : 0.0);
  if (m == 0.0) return {};
  int k = 0;
  const double f = std::frexp(m, &k);
  Mag r;
  r.man_ = f;
  r.exp_ = e + k;
  return r;
}

Mag Mag::from_double(double x) {
  Mag r;
  if (x == 0.0) return r;
  int k = 0;
  r.man_ = std::frexp(std::fabs(x), &k);
  r.exp_ = k;
  return r;
}

Mag Mag::pow2(std::int64_t e) {
  Mag r;
  r.man_ = 0.5;
  r.exp_ = e + 1;
  return r;
}

Mag Mag::upper_abs(mpfr_srcptr x) {
  if (mpfr_zero_p(x)) return {};
  long e = 0;
  double d = std::fabs(mpfr_get_d_2exp(&e, x, MPFR_RNDA));
  Mag r;
  if (d >= 1.0) {
    d *= 0.5;
    ++e;
  }
  r.man_ = d;
  r.exp_ = e;
  return r;
}

Mag Mag::lower_abs(mpfr_srcptr x) {
  if (mpfr_zero_p(x)) return {};
  long e = 0;
  const double d = std::fabs(mpfr_get_d_2exp(&e, x, MPFR_RNDZ));
  Mag r;
  r.man_ = d;
  r.exp_ = e;
  return r;
}

Mag Mag::ulp(mpfr_srcptr x) {
  if (mpfr_zero_p(x)) return {};
  return pow2(static_cast<std::int64_t>(mpfr_get_exp(x)) - mpfr_get_prec(x));
}

double Mag::to_double() const {
  if (is_zero()) return 0.0;
  if (exp_ > 1100) return kInf;
  if (exp_ < -1100) return std::numeric_limits<double>::denorm_min();
  const double v = std::ldexp(man_, static_cast<int>(exp_));
  return v == 0.0 ? std::numeric_limits<double>::denorm_min() : v;
}

double Mag::log2() const {
  if (is_zero()) return -kInf;
  return std::log2(man_) + static_cast<double>(exp_);
}

mpq_class Mag::to_mpq() const {
  if (is_zero()) return mpq_class(0);
  mpq_class r(man_);
  if (exp_ >= 0)
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(exp_));
  else
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-exp_));
  return r;
}

std::string Mag::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  const double l10 = log2() * 0.30102999566398120;
  const double e10 = std::floor(l10);
  os << std::pow(10.0, l10 - e10) << "e" << static_cast<long long>(e10);
  return os.str();
}

Mag add_up(Mag a, Mag b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.exp_ < b.exp_) std::swap(a, b);
  const std::int64_t gap = a.exp_ - b.exp_;
  if (gap > kMaxGap) return Mag::make(a.man_, a.exp_, Mag::Dir::up);
  const double s = a.man_ + std::ldexp(b.man_, static_cast<int>(-gap));
  return Mag::make(s, a.exp_, Mag::Dir::up);
}

Mag add_down(Mag a, Mag b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.exp_ < b.exp_) std::swap(a, b);
  const std::int64_t gap = a.exp_ - b.exp_;
  if (gap > kMaxGap) return a;
  const double s = a.man_ + std::ldexp(b.man_, static_cast<int>(-gap));
  return Mag::make(s, a.exp_, Mag::Dir::down);
}

Mag mul_up(Mag a, Mag b) {
  if (a.is_zero() || b.is_zero()) return {};
  return Mag::make(a.man_ * b.man_, a.exp_ + b.exp_, Mag::Dir::up);
}

Mag mul_down(Mag a, Mag b) {
  if (a.is_zero() || b.is_zero()) return {};
  return Mag::make(a.man_ * b.man_, a.exp_ + b.exp_, Mag::Dir::down);
}

Mag div_up(Mag a, Mag b) {
  if (a.is_zero()) return {};
  return Mag::make(a.man_ / b.man_, a.exp_ - b.exp_, Mag::Dir::up);
}

Mag div_down(Mag a, Mag b) {
  if (a.is_zero()) return {};
  return Mag::make(a.man_ / b.man_, a.exp_ - b.exp_, Mag::Dir::down);
}

Mag sub_down(Mag a, Mag b) {
  if (b.is_zero()) return a;
  if (compare(a, b) <= 0) return {};
  const std::int64_t gap = a.exp_ - b.exp_;
  if (gap > kMaxGap) return Mag::make(a.man_, a.exp_, Mag::Dir::down);
  const double s = a.man_ - std::ldexp(b.man_, static_cast<int>(-gap));
  if (s <= 0.0) return {};
  return Mag::make(s, a.exp_, Mag::Dir::down);
}

Mag sqrt_up(Mag a) {
  if (a.is_zero()) return a;
  double m = a.man_;
  std::int64_t e = a.exp_;
  if (e % 2 != 0) {
    m *= 2.0;
    --e;
  }
  const double s = std::nextafter(std::sqrt(m), kInf);
  return Mag::make(s, e / 2, Mag::Dir::up);
}

Mag sqrt_down(Mag a) {
  if (a.is_zero()) return a;
  double m = a.man_;
  std::int64_t e = a.exp_;
  if (e % 2 != 0) {
    m *= 2.0;
    --e;
  }
  const double s = std::nextafter(std::sqrt(m), 0.0);
  return Mag::make(s, e / 2, Mag::Dir::down);
}

Mag hypot_up(Mag a, Mag b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.exp_ < b.exp_) std::swap(a, b);
  const std::int64_t gap = a.exp_ - b.exp_;
  if (gap > 400) return Mag::make(a.man_, a.exp_, Mag::Dir::up);
  const double x = a.man_;
  const double y = std::ldexp(b.man_, static_cast<int>(-gap));
  double s = std::nextafter(x * x, kInf);
  s = std::nextafter(s + std::nextafter(y * y, kInf), kInf);
  return Mag::make(std::nextafter(std::sqrt(s), kInf), a.exp_, Mag::Dir::up);
}

Mag hypot_down(Mag a, Mag b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.exp_ < b.exp_) std::swap(a, b);
  const std::int64_t gap = a.exp_ - b.exp_;
  if (gap > 400) return a;
  const double x = a.man_;
  const double y = std::ldexp(b.man_, static_cast<int>(-gap));
  double s = std::nextafter(x * x, 0.0);
  s = std::nextafter(s + std::nextafter(y * y, 0.0), 0.0);
  return Mag::make(std::nextafter(std::sqrt(s), 0.0), a.exp_, Mag::Dir::down);
}

int compare(Mag a, Mag b) {
  if (a.is_zero()) return b.is_zero() ? 0 : -1;
  if (b.is_zero()) return 1;
  if (a.exp_ != b.exp_) return a.exp_ < b.exp_ ? -1 : 1;
  if (a.man_ == b.man_) return 0;
  return a.man_ < b.man_ ? -1 : 1;
}

}  // namespace qseries
