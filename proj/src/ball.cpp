// SPDX-License-Identifier: Apache-2.0
#include "qseries/ball.hpp"

#include <algorithm>
#include <cstring>
#include <vector>

#include "qseries/errors.hpp"

namespace qseries {

Real::Real(long prec) {
  mpfr_init2(v_, prec);
  mpfr_set_zero(v_, 1);
}

Real::Real(const Real& other) {
  mpfr_init2(v_, other.prec());
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  std::memcpy(v_, other.v_, sizeof(mpfr_t));
  other.v_->_mpfr_d = nullptr;
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    if (v_->_mpfr_d == nullptr)
      mpfr_init2(v_, other.prec());
    else
      mpfr_set_prec(v_, other.prec());
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  if (this != &other) {
    if (v_->_mpfr_d != nullptr) mpfr_clear(v_);
    std::memcpy(v_, other.v_, sizeof(mpfr_t));
    other.v_->_mpfr_d = nullptr;
  }
  return *this;
}

Real::~Real() {
  if (v_->_mpfr_d != nullptr) mpfr_clear(v_);
}

namespace {

Mag err_if(int inexact, mpfr_srcptr x) { return inexact != 0 ? Mag::ulp(x) : Mag(); }

long max_prec(const Ball& a, const Ball& b) {
  return std::max(a.precision().bits, b.precision().bits);
}

void set_mpq_from_mpfr(mpq_class& out, mpfr_srcptr x) { mpfr_get_q(out.get_mpq_t(), x); }

}  // namespace

Ball::Ball(Precision prec) : re_(prec.bits), im_(prec.bits) {}

Ball::Ball(const ExactRational& v, Precision prec) : re_(prec.bits), im_(prec.bits) {
  const int ire = mpfr_set_q(re_.get(), v.re().get_mpq_t(), MPFR_RNDN);
  const int iim = mpfr_set_q(im_.get(), v.im().get_mpq_t(), MPFR_RNDN);
  rad_ = err_if(ire, re_.get()) + err_if(iim, im_.get());
}

Ball Ball::from_double(double re, double im, Precision prec) {
  Ball r(prec);
  const int ire = mpfr_set_d(r.re_.get(), re, MPFR_RNDN);
  const int iim = mpfr_set_d(r.im_.get(), im, MPFR_RNDN);
  r.rad_ = err_if(ire, r.re_.get()) + err_if(iim, r.im_.get());
  return r;
}

Mag Ball::mid_abs_upper() const {
  return hypot_up(Mag::upper_abs(re_.get()), Mag::upper_abs(im_.get()));
}

Mag Ball::mid_abs_lower() const {
  return hypot_down(Mag::lower_abs(re_.get()), Mag::lower_abs(im_.get()));
}

ExactRational Ball::mid_exact() const {
  mpq_class re;
  mpq_class im;
  set_mpq_from_mpfr(re, re_.get());
  set_mpq_from_mpfr(im, im_.get());
  return ExactRational(re, im);
}

bool Ball::contains(const ExactRational& x) const {
  const ExactRational d = x - mid_exact();
  const mpq_class r = rad_.to_mpq();
  return d.norm() <= r * r;
}

bool Ball::contains(const Ball& inner) const {
  if (inner.rad_ > rad_) return false;
  const ExactRational d = inner.mid_exact() - mid_exact();
  const mpq_class slack = rad_.to_mpq() - inner.rad_.to_mpq();
  return d.norm() <= slack * slack;
}

bool overlaps(const Ball& a, const Ball& b) {
  const ExactRational d = a.mid_exact() - b.mid_exact();
  const mpq_class r = a.rad_.to_mpq() + b.rad_.to_mpq();
  return d.norm() <= r * r;
}

std::string Ball::mid_string(int digits) const {
  std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
  auto fmt = [&](mpfr_srcptr x) {
    mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, x);
    return std::string(buf.data());
  };
  const bool has_im = !mpfr_zero_p(im_.get());
  const bool has_re = !mpfr_zero_p(re_.get());
  if (!has_im) return fmt(re_.get());
  std::string im = fmt(im_.get());
  if (!has_re) return im + "i";
  if (im[0] != '-') im.insert(0, "+");
  return fmt(re_.get()) + im + "i";
}

std::string Ball::to_string(int digits) const {
  return "[" + mid_string(digits) + " +/- " + rad_.to_string() + "]";
}

Ball Ball::operator-() const {
  Ball r = *this;
  mpfr_neg(r.re_.get(), r.re_.get(), MPFR_RNDN);
  mpfr_neg(r.im_.get(), r.im_.get(), MPFR_RNDN);
  return r;
}

Ball operator+(const Ball& a, const Ball& b) {
  Ball r(Precision{max_prec(a, b)});
  const int ire = mpfr_add(r.re_.get(), a.re_.get(), b.re_.get(), MPFR_RNDN);
  const int iim = mpfr_add(r.im_.get(), a.im_.get(), b.im_.get(), MPFR_RNDN);
  r.rad_ = a.rad_ + b.rad_ + err_if(ire, r.re_.get()) + err_if(iim, r.im_.get());
  return r;
}

Ball operator-(const Ball& a, const Ball& b) {
  Ball r(Precision{max_prec(a, b)});
  const int ire = mpfr_sub(r.re_.get(), a.re_.get(), b.re_.get(), MPFR_RNDN);
  const int iim = mpfr_sub(r.im_.get(), a.im_.get(), b.im_.get(), MPFR_RNDN);
  r.rad_ = a.rad_ + b.rad_ + err_if(ire, r.re_.get()) + err_if(iim, r.im_.get());
  return r;
}

Ball operator*(const Ball& a, const Ball& b) {
  Ball r(Precision{max_prec(a, b)});
  // (x + iy)(u + iv) = (xu - yv) + i(xv + yu), each part rounded once.
  const int ire = mpfr_fmms(r.re_.get(), a.re_.get(), b.re_.get(), a.im_.get(), b.im_.get(), MPFR_RNDN);
  const int iim = mpfr_fmma(r.im_.get(), a.re_.get(), b.im_.get(), a.im_.get(), b.re_.get(), MPFR_RNDN);
  Mag rad = err_if(ire, r.re_.get()) + err_if(iim, r.im_.get());
  if (!a.rad_.is_zero() || !b.rad_.is_zero()) {
    const Mag am = a.mid_abs_upper();
    const Mag bm = b.mid_abs_upper();
    rad += am * b.rad_ + a.rad_ * bm + a.rad_ * b.rad_;
  }
  r.rad_ = rad;
  return r;
}

Ball operator/(const Ball& a, const Ball& b) {
  const Mag b_lo = b.mid_abs_lower();
  const Mag den_lo = sub_down(b_lo, b.rad_);
  if (den_lo.is_zero()) throw PrecisionError("division by a ball that contains zero");

  const long prec = max_prec(a, b);
  Ball r(Precision{prec});
  Real nre(prec), nim(prec), den(prec);
  mpfr_fmma(den.get(), b.re_.get(), b.re_.get(), b.im_.get(), b.im_.get(), MPFR_RNDN);
  mpfr_fmma(nre.get(), a.re_.get(), b.re_.get(), a.im_.get(), b.im_.get(), MPFR_RNDN);
  mpfr_fmms(nim.get(), a.im_.get(), b.re_.get(), a.re_.get(), b.im_.get(), MPFR_RNDN);
  const int ire = mpfr_div(r.re_.get(), nre.get(), den.get(), MPFR_RNDN);
  const int iim = mpfr_div(r.im_.get(), nim.get(), den.get(), MPFR_RNDN);

  // Rounding of the numerator and of |b|^2 perturbs the quotient by at most
  // 2^(3-P) |n|/|b|^2; the final divisions add one ulp per component.
  const Mag n_up = hypot_up(Mag::upper_abs(nre.get()), Mag::upper_abs(nim.get()));
  const Mag d_lo = Mag::lower_abs(den.get());
  Mag rad = err_if(ire, r.re_.get()) + err_if(iim, r.im_.get());
  rad += div_up(n_up, d_lo) * Mag::pow2(3 - prec);

  if (!a.rad_.is_zero() || !b.rad_.is_zero()) {
    // |x/y - m1/m2| <= (r1 + |m1/m2| r2) / (|m2| - r2)
    const Mag ratio = div_up(a.mid_abs_upper(), b_lo);
    rad += div_up(a.rad_ + ratio * b.rad_, den_lo);
  }
  r.rad_ = rad;
  return r;
}

Ball sqrt(const Ball& a) {
  const long prec = a.precision().bits;
  const Mag m_lo = a.mid_abs_lower();
  if (a.mid_abs_upper().is_zero() && a.rad_.is_zero()) return Ball(Precision{prec});
  if (m_lo <= a.rad_) throw PrecisionError("square root of a ball that contains zero");

  // Candidate s from the half-angle formulas at extra precision.
  const long wp = prec + 32;
  Real t(wp), u(wp), sre(wp), sim(wp);
  mpfr_hypot(t.get(), a.re_.get(), a.im_.get(), MPFR_RNDN);
  if (mpfr_sgn(a.re_.get()) >= 0) {
    mpfr_add(u.get(), t.get(), a.re_.get(), MPFR_RNDN);
    mpfr_div_2ui(u.get(), u.get(), 1, MPFR_RNDN);
    mpfr_sqrt(sre.get(), u.get(), MPFR_RNDN);
    mpfr_div(sim.get(), a.im_.get(), sre.get(), MPFR_RNDN);
    mpfr_div_2ui(sim.get(), sim.get(), 1, MPFR_RNDN);
  } else {
    mpfr_sub(u.get(), t.get(), a.re_.get(), MPFR_RNDN);
    mpfr_div_2ui(u.get(), u.get(), 1, MPFR_RNDN);
    mpfr_sqrt(sim.get(), u.get(), MPFR_RNDN);
    if (mpfr_sgn(a.im_.get()) < 0) mpfr_neg(sim.get(), sim.get(), MPFR_RNDN);
    mpfr_div(sre.get(), a.im_.get(), sim.get(), MPFR_RNDN);
    mpfr_div_2ui(sre.get(), sre.get(), 1, MPFR_RNDN);
  }
  Ball s(Precision{prec});
  mpfr_set(s.re_.get(), sre.get(), MPFR_RNDN);
  mpfr_set(s.im_.get(), sim.get(), MPFR_RNDN);

  // e = m - s^2 with every rounding accounted for; then
  // |sqrt(m) - s| <= |e| / |s| whenever |e| <= |s|^2 / 2.
  const long ep = 2 * prec + 8;
  Real sq_re(ep), sq_im(ep), e_re(ep), e_im(ep);
  Mag e_err;
  e_err += err_if(mpfr_fmms(sq_re.get(), s.re_.get(), s.re_.get(), s.im_.get(), s.im_.get(), MPFR_RNDN),
                  sq_re.get());
  e_err += err_if(mpfr_mul(sq_im.get(), s.re_.get(), s.im_.get(), MPFR_RNDN), sq_im.get()) * Mag::pow2(1);
  mpfr_mul_2ui(sq_im.get(), sq_im.get(), 1, MPFR_RNDN);
  e_err += err_if(mpfr_sub(e_re.get(), a.re_.get(), sq_re.get(), MPFR_RNDN), e_re.get());
  e_err += err_if(mpfr_sub(e_im.get(), a.im_.get(), sq_im.get(), MPFR_RNDN), e_im.get());
  const Mag e_up = hypot_up(Mag::upper_abs(e_re.get()), Mag::upper_abs(e_im.get())) + e_err;
  const Mag s_lo = s.mid_abs_lower();
  if (s_lo.is_zero() || e_up > mul_down(mul_down(s_lo, s_lo), Mag::pow2(-1)))
    throw PrecisionError("square root candidate not accurate enough");
  s.rad_ = div_up(e_up, s_lo);
  // |d sqrt(w)/dw| <= 1 / (2 sqrt(|m| - r)) along the segment to any point.
  if (!a.rad_.is_zero()) s.rad_ += div_up(a.rad_, sqrt_down(sub_down(m_lo, a.rad_)));
  return s;
}

Ball pow(const Ball& x, long n) {
  if (n < 0) return one(x.precision()) / pow(x, -n);
  Ball result = one(x.precision());
  Ball base = x;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return result;
}

}  // namespace qseries
