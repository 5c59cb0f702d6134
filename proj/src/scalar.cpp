// SPDX-License-Identifier: Apache-2.0
#include "qseries/scalar.hpp"

#include <optional>

#include "qseries/errors.hpp"

namespace qseries {

namespace {

std::optional<mpq_class> rational_sqrt(const mpq_class& v) {
  if (sgn(v) < 0) return std::nullopt;
  const mpz_class& num = v.get_num();
  const mpz_class& den = v.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
    return std::nullopt;
  mpz_class rn;
  mpz_class rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  return mpq_class(rn, rd);
}

std::optional<ExactRational> exact_sqrt(const ExactRational& x) {
  if (x.is_zero()) return ExactRational();
  if (x.is_real()) {
    if (sgn(x.re()) > 0) {
      if (auto r = rational_sqrt(x.re())) return ExactRational(*r);
      return std::nullopt;
    }
    if (auto r = rational_sqrt(-x.re())) return ExactRational(mpq_class(0), *r);
    return std::nullopt;
  }
  // sqrt(a+bi) = s + (b/2s) i with s = sqrt((|z|+a)/2) > 0.
  const auto t = rational_sqrt(x.norm());
  if (!t) return std::nullopt;
  const auto s = rational_sqrt((*t + x.re()) / 2);
  if (!s || sgn(*s) == 0) return std::nullopt;
  return ExactRational(*s, x.im() / (2 * *s));
}

}  // namespace

Mag exact_abs_upper(const ExactRational& x) {
  if (x.is_zero()) return {};
  Real t(64);
  mpfr_set_q(t.get(), x.norm().get_mpq_t(), MPFR_RNDU);
  mpfr_sqrt(t.get(), t.get(), MPFR_RNDU);
  return Mag::upper_abs(t.get());
}

Mag exact_abs_lower(const ExactRational& x) {
  if (x.is_zero()) return {};
  Real t(64);
  mpfr_set_q(t.get(), x.norm().get_mpq_t(), MPFR_RNDD);
  mpfr_sqrt(t.get(), t.get(), MPFR_RNDD);
  return Mag::lower_abs(t.get());
}

Ball Scalar::to_ball(Precision p) const {
  if (is_exact()) return Ball(exact(), p);
  return ball();
}

Mag Scalar::abs_upper() const { return is_exact() ? exact_abs_upper(exact()) : ball().abs_upper(); }

Mag Scalar::abs_lower() const { return is_exact() ? exact_abs_lower(exact()) : ball().abs_lower(); }

bool Scalar::may_be_zero() const { return is_exact() ? exact().is_zero() : ball().contains_zero(); }

Mag Scalar::radius() const { return is_exact() ? Mag() : ball().rad(); }

bool Scalar::contains(const ExactRational& x) const {
  return is_exact() ? exact() == x : ball().contains(x);
}

double Scalar::re_approx() const { return is_exact() ? exact().re().get_d() : ball().re_approx(); }

double Scalar::im_approx() const { return is_exact() ? exact().im().get_d() : ball().im_approx(); }

std::string Scalar::to_string(int digits) const {
  return is_exact() ? exact().to_string() : ball().to_string(digits);
}

Scalar Scalar::operator-() const {
  if (is_exact()) return -exact();
  return -ball();
}

#define QSERIES_SCALAR_BINOP(OP)                                          \
  Scalar operator OP(const Scalar& a, const Scalar& b) {                  \
    if (a.is_exact() && b.is_exact()) return a.exact() OP b.exact();      \
    if (a.is_exact()) return Ball(a.exact(), b.ball().precision()) OP b.ball(); \
    if (b.is_exact()) return a.ball() OP Ball(b.exact(), a.ball().precision()); \
    return a.ball() OP b.ball();                                          \
  }

QSERIES_SCALAR_BINOP(+)
QSERIES_SCALAR_BINOP(-)
QSERIES_SCALAR_BINOP(*)
QSERIES_SCALAR_BINOP(/)

#undef QSERIES_SCALAR_BINOP

Scalar pow(const Scalar& x, long n) {
  if (x.is_exact()) return pow(x.exact(), n);
  return pow(x.ball(), n);
}

Scalar sqrt(const Scalar& x, Precision p) {
  if (x.is_exact()) {
    if (auto r = exact_sqrt(x.exact())) return *r;
    return sqrt(Ball(x.exact(), p));
  }
  return sqrt(x.ball());
}

}  // namespace qseries
