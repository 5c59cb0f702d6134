// SPDX-License-Identifier: Apache-2.0
#include "qseries/exact.hpp"

#include <cmath>
#include <string>

#include "qseries/errors.hpp"

namespace qseries {

namespace {

std::string render_real(const mpq_class& v) {
  mpz_class den = v.get_den();
  unsigned long twos = 0;
  unsigned long fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
    den /= 2;
    ++twos;
  }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
    den /= 5;
    ++fives;
  }
  if (den != 1) return v.get_str();
  const unsigned long digits = std::max(twos, fives);
  if (digits == 0) return v.get_num().get_str();

  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
  mpz_class scaled = abs(v.get_num()) * scale / v.get_den();
  std::string s = scaled.get_str();
  if (s.size() <= digits) s.insert(0, digits - s.size() + 1, '0');
  s.insert(s.size() - digits, ".");
  return (sgn(v) < 0 ? "-" : "") + s;
}

mpq_class parse_real(std::string_view text) {
  if (text.empty()) throw ConfigError("empty number");
  std::string s(text);
  bool neg = false;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    s.erase(0, 1);
  }
  if (s.empty()) throw ConfigError("malformed number '" + std::string(text) + "'");
  mpq_class r;
  const auto slash = s.find('/');
  const auto dot = s.find('.');
  const auto exp = s.find_first_of("eE");
  auto digits_only = [](const std::string& t) {
    return !t.empty() && t.find_first_not_of("0123456789") == std::string::npos;
  };
  if (slash != std::string::npos) {
    const std::string num = s.substr(0, slash);
    const std::string den = s.substr(slash + 1);
    if (!digits_only(num) || !digits_only(den))
      throw ConfigError("malformed fraction '" + std::string(text) + "'");
    r = mpq_class(mpz_class(num, 10), mpz_class(den, 10));
    if (r.get_den() == 0) throw ConfigError("zero denominator in '" + std::string(text) + "'");
    r.canonicalize();
  } else {
    std::string mant = exp == std::string::npos ? s : s.substr(0, exp);
    long e10 = 0;
    if (exp != std::string::npos) {
      const std::string es = s.substr(exp + 1);
      try {
        std::size_t used = 0;
        e10 = std::stol(es, &used);
        if (used != es.size()) throw ConfigError("");
      } catch (const std::exception&) {
        throw ConfigError("malformed exponent in '" + std::string(text) + "'");
      }
    }
    std::string intpart = mant;
    std::string frac;
    if (dot != std::string::npos && (exp == std::string::npos || dot < exp)) {
      intpart = mant.substr(0, dot);
      frac = mant.substr(dot + 1);
    }
    if (intpart.empty()) intpart = "0";
    if (!digits_only(intpart) || (!frac.empty() && !digits_only(frac)))
      throw ConfigError("malformed decimal '" + std::string(text) + "'");
    mpz_class num(intpart + frac, 10);
    e10 -= static_cast<long>(frac.size());
    mpz_class p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(e10)));
    r = e10 >= 0 ? mpq_class(num * p10) : mpq_class(num, p10);
    r.canonicalize();
  }
  return neg ? mpq_class(-r) : r;
}

}  // namespace

ExactRational::ExactRational(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
  re_.canonicalize();
  im_.canonicalize();
}

ExactRational ExactRational::fraction(long num, long den) {
  if (den == 0) throw PoleError("fraction with zero denominator");
  mpq_class r(num, den);
  r.canonicalize();
  return ExactRational(r);
}

ExactRational ExactRational::parse(std::string_view text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s.push_back(c);
  if (s.empty()) throw ConfigError("empty complex rational");
  if (s.back() != 'i') return ExactRational(parse_real(s));

  s.pop_back();
  // Split at the last sign that is not a leading sign or an exponent sign.
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto imag_of = [](std::string t) {
    if (t.empty() || t == "+") return mpq_class(1);
    if (t == "-") return mpq_class(-1);
    return parse_real(t);
  };
  if (split == std::string::npos) return ExactRational(mpq_class(0), imag_of(s));
  return ExactRational(parse_real(s.substr(0, split)), imag_of(s.substr(split)));
}

double ExactRational::abs_approx() const { return std::hypot(re_.get_d(), im_.get_d()); }

ExactRational operator+(const ExactRational& a, const ExactRational& b) {
  return ExactRational(a.re_ + b.re_, a.im_ + b.im_);
}

ExactRational operator-(const ExactRational& a, const ExactRational& b) {
  return ExactRational(a.re_ - b.re_, a.im_ - b.im_);
}

ExactRational operator*(const ExactRational& a, const ExactRational& b) {
  if (a.is_real() && b.is_real()) return ExactRational(a.re_ * b.re_);
  return ExactRational(a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_);
}

ExactRational operator/(const ExactRational& a, const ExactRational& b) {
  if (b.is_zero()) throw PoleError("exact division by zero");
  if (b.is_real()) return ExactRational(a.re_ / b.re_, a.im_ / b.re_);
  const mpq_class n = b.norm();
  return ExactRational((a.re_ * b.re_ + a.im_ * b.im_) / n, (a.im_ * b.re_ - a.re_ * b.im_) / n);
}

std::string ExactRational::to_string() const {
  if (is_real()) return render_real(re_);
  std::string im = render_real(abs(im_));
  if (im == "1") im.clear();
  if (sgn(re_) == 0) return (sgn(im_) < 0 ? "-" : "") + im + "i";
  return render_real(re_) + (sgn(im_) < 0 ? "-" : "+") + im + "i";
}

ExactRational pow(const ExactRational& x, long n) {
  if (n < 0) return ExactRational(1) / pow(x, -n);
  ExactRational result(1);
  ExactRational base = x;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return result;
}

}  // namespace qseries
