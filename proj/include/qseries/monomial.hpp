// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <map>
#include <set>
#include <string>
#include <string_view>

#include "qseries/scalar.hpp"

namespace qseries {

/// coeff * q^(q_half/2 + q_n*n) * prod sym^(half/2).
///
/// Written in a small text syntax: "q^2/(b*c*d)", "-q*sqrt(u)",
/// "q^(n+1)/(b*c*d)", "b*c*d*q^-n", "sqrt(q)".
struct Monomial {
  ExactRational coeff{1};
  long q_half = 0;
  long q_n = 0;
  std::map<std::string, long> sym_half;
  std::string text;

  static Monomial parse(std::string_view src);
  static Monomial constant(const ExactRational& c);

  std::set<std::string> symbols() const;
  /// Symbols that appear with an odd half-power (and need a square root).
  std::set<std::string> root_symbols() const;

  Monomial operator*(const Monomial& o) const;
  Monomial inverse() const;
  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.coeff == b.coeff && a.q_half == b.q_half && a.q_n == b.q_n && a.sym_half == b.sym_half;
  }
};

/// Values of the symbols a monomial refers to. "q" is an ordinary entry.
/// Square roots are principal and computed once per symbol, so every
/// occurrence of sqrt(u) within one evaluation uses the same branch.
class Bindings {
 public:
  explicit Bindings(Precision p = {}, long n = 0) : precision_(p), n_(n) {}

  void set(const std::string& name, Scalar v);
  bool has(const std::string& name) const { return values_.count(name) != 0; }
  const Scalar& get(const std::string& name) const;
  const Scalar& root(const std::string& name) const;
  /// Replace the cached square root (used to test branch invariance).
  void set_root(const std::string& name, Scalar r);

  long n() const { return n_; }
  void set_n(long n) { n_ = n; }
  Precision precision() const { return precision_; }
  const std::map<std::string, Scalar>& values() const { return values_; }

 private:
  Precision precision_;
  long n_;
  std::map<std::string, Scalar> values_;
  mutable std::map<std::string, Scalar> roots_;
};

Scalar evaluate(const Monomial& m, const Bindings& b);

using ComplexMap = std::map<std::string, std::complex<double>>;
/// Double precision evaluation used for admissibility screening.
std::complex<double> evaluate_approx(const Monomial& m, const ComplexMap& values, long n);

}  // namespace qseries
