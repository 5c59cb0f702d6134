// SPDX-License-Identifier: Apache-2.0
#include "qseries/monomial.hpp"

#include <cctype>
#include <cstdlib>

#include "qseries/errors.hpp"

namespace qseries {

namespace {

struct LinearExp {
  long c0 = 0;
  long c1 = 0;  // coefficient of n
};

Monomial power(const Monomial& m, long k) {
  Monomial r;
  r.coeff = pow(m.coeff, k);
  r.q_half = m.q_half * k;
  r.q_n = m.q_n * k;
  for (const auto& [s, h] : m.sym_half)
    if (h * k != 0) r.sym_half[s] = h * k;
  return r;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : s_(src) {}

  Monomial run() {
    Monomial m = product();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return m;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ConfigError("monomial '" + std::string(s_) + "': " + why);
  }

  void skip() {
    while (pos_ < s_.size() && s_[pos_] == ' ') ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  long integer() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    return std::strtol(std::string(s_.substr(start, pos_ - start)).c_str(), nullptr, 10);
  }

  std::string ident() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a symbol");
    return std::string(s_.substr(start, pos_ - start));
  }

  bool peek_digit() {
    skip();
    return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]));
  }

  LinearExp exp_atom() {
    if (peek_digit()) return {integer(), 0};
    if (ident() != "n") fail("exponents may only use integers and n");
    return {0, 1};
  }

  LinearExp exponent() {
    if (eat('(')) {
      LinearExp e;
      long sign = eat('-') ? -1 : 1;
      for (;;) {
        const LinearExp a = exp_atom();
        e.c0 += sign * a.c0;
        e.c1 += sign * a.c1;
        if (eat('+'))
          sign = 1;
        else if (eat('-'))
          sign = -1;
        else
          break;
      }
      if (!eat(')')) fail("missing ')' in exponent");
      return e;
    }
    const long sign = eat('-') ? -1 : 1;
    const LinearExp a = exp_atom();
    return {sign * a.c0, sign * a.c1};
  }

  Monomial symbol_power(const std::string& name, long half) {
    Monomial m;
    if (name == "q")
      m.q_half = half;
    else
      m.sym_half[name] = half;
    return m;
  }

  Monomial factor() {
    if (eat('(')) {
      Monomial m = product();
      if (!eat(')')) fail("missing ')'");
      if (eat('^')) {
        const LinearExp e = exponent();
        if (e.c1 != 0) fail("n exponents are only allowed on q");
        m = power(m, e.c0);
      }
      return m;
    }
    if (peek_digit()) return Monomial::constant(ExactRational(integer()));
    const std::string name = ident();
    if (name == "sqrt") {
      if (!eat('(')) fail("expected '(' after sqrt");
      const std::string inner = ident();
      if (!eat(')')) fail("missing ')' after sqrt");
      return symbol_power(inner, 1);
    }
    if (!eat('^')) return symbol_power(name, 2);
    const LinearExp e = exponent();
    if (e.c1 != 0 && name != "q") fail("n exponents are only allowed on q");
    Monomial m = symbol_power(name, 2 * e.c0);
    m.q_n = e.c1;
    return m;
  }

  Monomial product() {
    const bool negative = eat('-');
    Monomial m = factor();
    for (;;) {
      if (eat('*'))
        m = m * factor();
      else if (eat('/'))
        m = m * factor().inverse();
      else
        break;
    }
    if (negative) m.coeff = -m.coeff;
    return m;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

long floor_half(long h) { return h >= 0 ? h / 2 : -((-h + 1) / 2); }

}  // namespace

Monomial Monomial::parse(std::string_view src) {
  Monomial m = Parser(src).run();
  m.text = std::string(src);
  return m;
}

Monomial Monomial::constant(const ExactRational& c) {
  Monomial m;
  m.coeff = c;
  m.text = c.to_string();
  return m;
}

std::set<std::string> Monomial::symbols() const {
  std::set<std::string> r;
  for (const auto& [s, h] : sym_half) r.insert(s);
  if (q_half != 0 || q_n != 0) r.insert("q");
  return r;
}

std::set<std::string> Monomial::root_symbols() const {
  std::set<std::string> r;
  for (const auto& [s, h] : sym_half)
    if (h % 2 != 0) r.insert(s);
  if (q_half % 2 != 0) r.insert("q");
  return r;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r = *this;
  r.coeff *= o.coeff;
  r.q_half += o.q_half;
  r.q_n += o.q_n;
  for (const auto& [s, h] : o.sym_half) {
    const long v = (r.sym_half[s] += h);
    if (v == 0) r.sym_half.erase(s);
  }
  r.text.clear();
  return r;
}

Monomial Monomial::inverse() const {
  if (coeff.is_zero()) throw PoleError("inverse of a zero monomial");
  Monomial r = power(*this, -1);
  return r;
}

void Bindings::set(const std::string& name, Scalar v) {
  values_[name] = std::move(v);
  roots_.erase(name);
}

const Scalar& Bindings::get(const std::string& name) const {
  const auto it = values_.find(name);
  if (it == values_.end()) throw ConfigError("unbound symbol '" + name + "'");
  return it->second;
}

const Scalar& Bindings::root(const std::string& name) const {
  const auto it = roots_.find(name);
  if (it != roots_.end()) return it->second;
  return roots_[name] = sqrt(get(name), precision_);
}

void Bindings::set_root(const std::string& name, Scalar r) { roots_[name] = std::move(r); }

Scalar evaluate(const Monomial& m, const Bindings& b) {
  Scalar r(m.coeff);
  auto apply = [&](const std::string& name, long half) {
    if (half == 0) return;
    const long whole = floor_half(half);
    if (whole != 0) r *= pow(b.get(name), whole);
    if (half - 2 * whole != 0) r *= b.root(name);
  };
  apply("q", m.q_half + 2 * m.q_n * b.n());
  for (const auto& [s, h] : m.sym_half) apply(s, h);
  return r;
}

std::complex<double> evaluate_approx(const Monomial& m, const ComplexMap& values, long n) {
  std::complex<double> r(m.coeff.re().get_d(), m.coeff.im().get_d());
  auto apply = [&](const std::string& name, long half) {
    if (half == 0) return;
    const auto it = values.find(name);
    if (it == values.end()) throw ConfigError("unbound symbol '" + name + "'");
    const long whole = floor_half(half);
    r *= std::pow(it->second, static_cast<int>(whole));
    if (half - 2 * whole != 0) r *= std::sqrt(it->second);
  };
  apply("q", m.q_half + 2 * m.q_n * n);
  for (const auto& [s, h] : m.sym_half) apply(s, h);
  return r;
}

}  // namespace qseries
