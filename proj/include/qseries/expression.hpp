// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qseries/monomial.hpp"
#include "qseries/series.hpp"

namespace qseries {

/// A sum of monomials such as "1 - q" or "(q-1)/q".
struct Coefficient {
  std::vector<Monomial> terms;
  std::string text;

  static Coefficient one();
  static Coefficient of(std::string_view mono);
  static Coefficient sum(std::initializer_list<std::string_view> monos, std::string text);
};

/// [numer; denom]_order with order either infinite or c0 + c1*n.
struct Bracket {
  std::vector<Monomial> numer;
  std::vector<Monomial> denom;
  bool infinite = true;
  long c0 = 0;
  long c1 = 0;

  Order order(long n) const { return infinite ? Order::inf() : Order::finite(c0 + c1 * n); }
};

struct SeriesTemplate {
  SeriesKind kind = SeriesKind::unilateral;
  std::vector<Monomial> numer;
  std::vector<Monomial> denom;
  Monomial z;
};

/// coeff * prod(brackets) * series (each part optional).
struct Term {
  Coefficient coeff = Coefficient::one();
  std::vector<Bracket> brackets;
  std::optional<SeriesTemplate> series;
};

struct Expression {
  std::vector<Term> terms;
};

/// Comma separated monomials: "q/b, q/c, q/d".
std::vector<Monomial> parse_list(std::string_view src);

Scalar evaluate(const Coefficient& c, const Bindings& b);
SeriesSpec instantiate(const SeriesTemplate& t, const Bindings& b);

struct TermValue {
  Scalar value;
  long terms_used = 0;
};

/// Evaluates one term. Errors carry the bracket or series that raised them.
TermValue evaluate(const Term& t, const Bindings& b, const EvalOptions& opts);

}  // namespace qseries
