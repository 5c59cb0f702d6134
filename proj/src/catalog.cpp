// SPDX-License-Identifier: Apache-2.0
#include <algorithm>

#include "qseries/errors.hpp"
#include "qseries/identities.hpp"

namespace qseries {

namespace {

Bracket inf(std::string_view num, std::string_view den) {
  return {parse_list(num), parse_list(den), true, 0, 0};
}

/// Finite bracket of order c0 + c1*n.
Bracket fin(std::string_view num, std::string_view den, long c0, long c1) {
  return {parse_list(num), parse_list(den), false, c0, c1};
}

SeriesTemplate phi(std::string_view num, std::string_view den, std::string_view z) {
  return {SeriesKind::unilateral, parse_list(num), parse_list(den), Monomial::parse(z)};
}

SeriesTemplate psi(std::string_view num, std::string_view den, std::string_view z) {
  return {SeriesKind::bilateral, parse_list(num), parse_list(den), Monomial::parse(z)};
}

Term series_term(SeriesTemplate s) { return {Coefficient::one(), {}, std::move(s)}; }

Term product_term(Coefficient c, std::vector<Bracket> brackets, std::optional<SeriesTemplate> s = {}) {
  return {std::move(c), std::move(brackets), std::move(s)};
}

Constraint solve_for(std::string symbol, std::string_view formula, std::string display) {
  return {std::move(symbol), Monomial::parse(formula), std::move(display)};
}

Condition cond(std::string display, std::string_view value) {
  return {std::move(display), Monomial::parse(value)};
}

// Both theorem families share their right hand sides and the phi series of
// the second left hand term with the corresponding propositions.

SeriesTemplate thm_a_psi(std::string_view z) {
  return psi("b, c, d, e, f, g, h", "q/b, q/c, q/d, q/e, q/f, q/g, q/h", z);
}

Term thm_a_phi8_term() {
  return product_term(
      Coefficient::one(),
      {inf("q, b, c, d, e, f, g, h, b*q/c, b*q/d, b*q/e, b*q/f, b*q/g, b*q/h",
           "b^2*q, 1/b, q/c, q/d, q/e, q/f, q/g, q/h, b*c, b*d, b*e, b*f, b*g, b*h")},
      phi("b^2, -q*b, b*c, b*d, b*e, b*f, b*g, b*h", "-b, b*q/c, b*q/d, b*q/e, b*q/f, b*q/g, b*q/h", "q"));
}

Expression thm_a_rhs() {
  Expression e;
  e.terms.push_back(product_term(
      Coefficient::one(),
      {inf("q, b, u*q/f, u*q/g, u*q/h, b*f/u, b*g/u, b*h/u", "u*q, b/u, q/f, q/g, q/h, b*f, b*g, b*h")},
      phi("u, q*sqrt(u), -q*sqrt(u), b, u*c, u*d, u*e, f, g, h",
          "sqrt(u), -sqrt(u), u*q/b, q/c, q/d, q/e, u*q/f, u*q/g, u*q/h", "q")));
  e.terms.push_back(product_term(
      Coefficient::one(),
      {inf("q, b, f, g, h, b*q/f, b*q/g, b*q/h, u*c, u*d, u*e, b*q/(u*c), b*q/(u*d), b*q/(u*e)",
           "b^2*q/u, u/b, q/c, q/d, q/e, q/f, q/g, q/h, b*c, b*d, b*e, b*f, b*g, b*h")},
      phi("b^2/u, q*b/sqrt(u), -q*b/sqrt(u), b, b*c, b*d, b*e, b*f/u, b*g/u, b*h/u",
          "b/sqrt(u), -b/sqrt(u), b*q/u, b*q/(u*c), b*q/(u*d), b*q/(u*e), b*q/f, b*q/g, b*q/h", "q")));
  return e;
}

SeriesTemplate thm_b_psi(std::string_view z) {
  return psi("b, c, d, e, f, g, h", "q^2/b, q^2/c, q^2/d, q^2/e, q^2/f, q^2/g, q^2/h", z);
}

SeriesTemplate thm_b_phi9() {
  return phi("b^2/q, b*sqrt(q), -b*sqrt(q), b*c/q, b*d/q, b*e/q, b*f/q, b*g/q, b*h/q",
             "b/sqrt(q), -b/sqrt(q), b*q/c, b*q/d, b*q/e, b*q/f, b*q/g, b*q/h", "q");
}

Term thm_b_v_term(Coefficient c) {
  return product_term(
      std::move(c),
      {inf("q, b/q, v*q/f, v*q/g, v*q/h, b*f/v, b*g/v, b*h/v",
           "v*q, b/v, q^2/f, q^2/g, q^2/h, b*f/q, b*g/q, b*h/q")},
      phi("v, q*sqrt(v), -q*sqrt(v), b, v*c/q, v*d/q, v*e/q, f, g, h",
          "sqrt(v), -sqrt(v), v*q/b, q^2/c, q^2/d, q^2/e, v*q/f, v*q/g, v*q/h", "q"));
}

Term thm_b_w_term(Coefficient c) {
  return product_term(
      std::move(c),
      {inf("q, b/q, f, g, h, b*q/f, b*q/g, b*q/h, v*c/q, v*d/q, v*e/q, b*q^2/(v*c), b*q^2/(v*d), b*q^2/(v*e)",
           "b^2*q/v, v/b, q^2/c, q^2/d, q^2/e, q^2/f, q^2/g, q^2/h, b*c/q, b*d/q, b*e/q, b*f/q, b*g/q, b*h/q")},
      phi("b^2/v, q*b/sqrt(v), -q*b/sqrt(v), b, b*c/q, b*d/q, b*e/q, b*f/v, b*g/v, b*h/v",
          "b/sqrt(v), -b/sqrt(v), b*q/v, b*q^2/(v*c), b*q^2/(v*d), b*q^2/(v*e), b*q/f, b*q/g, b*q/h", "q"));
}

IdentityDescriptor four_term() {
  IdentityDescriptor d;
  d.id = "four-term";
  d.title = "four-term 10phi9 transformation";
  d.free_params = {"a", "b", "c", "d", "e", "f", "g"};
  d.constraint = solve_for("h", "q^2*a^3/(b*c*d*e*f*g)", "q^2 a^3 = b c d e f g h");
  d.derived = {{"lam", Monomial::parse("q*a^2/(c*d*e)")}};
  d.lhs.terms.push_back(series_term(
      phi("a, q*sqrt(a), -q*sqrt(a), b, c, d, e, f, g, h",
          "sqrt(a), -sqrt(a), a*q/b, a*q/c, a*q/d, a*q/e, a*q/f, a*q/g, a*q/h", "q")));
  d.lhs.terms.push_back(product_term(
      Coefficient::one(),
      {inf("a*q, b/a, c, d, e, f, g, h, b*q/c, b*q/d, b*q/e, b*q/f, b*q/g, b*q/h",
           "b^2*q/a, a/b, a*q/c, a*q/d, a*q/e, a*q/f, a*q/g, a*q/h, b*c/a, b*d/a, b*e/a, b*f/a, b*g/a, b*h/a")},
      phi("b^2/a, q*b/sqrt(a), -q*b/sqrt(a), b, b*c/a, b*d/a, b*e/a, b*f/a, b*g/a, b*h/a",
          "b/sqrt(a), -b/sqrt(a), b*q/a, b*q/c, b*q/d, b*q/e, b*q/f, b*q/g, b*q/h", "q")));
  d.rhs.terms.push_back(product_term(
      Coefficient::one(),
      {inf("a*q, b/a, lam*q/f, lam*q/g, lam*q/h, b*f/lam, b*g/lam, b*h/lam",
           "lam*q, b/lam, a*q/f, a*q/g, a*q/h, b*f/a, b*g/a, b*h/a")},
      phi("lam, q*sqrt(lam), -q*sqrt(lam), b, lam*c/a, lam*d/a, lam*e/a, f, g, h",
          "sqrt(lam), -sqrt(lam), lam*q/b, a*q/c, a*q/d, a*q/e, lam*q/f, lam*q/g, lam*q/h", "q")));
  d.rhs.terms.push_back(product_term(
      Coefficient::one(),
      {inf("a*q, b/a, f, g, h, b*q/f, b*q/g, b*q/h, lam*c/a, lam*d/a, lam*e/a, a*b*q/(lam*c), a*b*q/(lam*d), "
           "a*b*q/(lam*e)",
           "b^2*q/lam, lam/b, a*q/c, a*q/d, a*q/e, a*q/f, a*q/g, a*q/h, b*c/a, b*d/a, b*e/a, b*f/a, b*g/a, b*h/a")},
      phi("b^2/lam, q*b/sqrt(lam), -q*b/sqrt(lam), b, b*c/a, b*d/a, b*e/a, b*f/lam, b*g/lam, b*h/lam",
          "b/sqrt(lam), -b/sqrt(lam), b*q/lam, a*b*q/(lam*c), a*b*q/(lam*d), a*b*q/(lam*e), b*q/f, b*q/g, b*q/h",
          "q")));
  d.symmetric = {{"c", "d", "e"}, {"f", "g", "h"}};
  return d;
}

IdentityDescriptor p33(std::string id, bool shifted, bool reflected) {
  IdentityDescriptor d;
  d.id = std::move(id);
  d.free_params = {"b", "c", "d"};
  d.symmetric = {{"b", "c", "d"}};
  if (!shifted) {
    d.title = reflected ? "3psi3 summation, z = q^2/bcd" : "3psi3 summation, z = q/bcd";
    d.conditions = {cond("q/bcd", "q/(b*c*d)")};
    d.lhs.terms.push_back(
        series_term(psi("b, c, d", "q/b, q/c, q/d", reflected ? "q^2/(b*c*d)" : "q/(b*c*d)")));
    d.rhs.terms.push_back(product_term(
        Coefficient::one(), {inf("q, q/(b*c), q/(b*d), q/(c*d)", "q/b, q/c, q/d, q/(b*c*d)")}));
  } else {
    d.title = reflected ? "3psi3 summation, z = q^4/bcd" : "3psi3 summation, z = q^2/bcd, q^2-shifted";
    d.conditions = {cond("q^2/bcd", "q^2/(b*c*d)")};
    d.lhs.terms.push_back(
        series_term(psi("b, c, d", "q^2/b, q^2/c, q^2/d", reflected ? "q^4/(b*c*d)" : "q^2/(b*c*d)")));
    d.rhs.terms.push_back(product_term(
        reflected ? Coefficient::of("-1/q") : Coefficient::one(),
        {inf("q, q^2/(b*c), q^2/(b*d), q^2/(c*d)", "q^2/b, q^2/c, q^2/d, q^2/(b*c*d)")}));
  }
  return d;
}

IdentityDescriptor p55(std::string id, bool shifted, bool reflected) {
  IdentityDescriptor d;
  d.id = std::move(id);
  d.free_params = {"b", "c", "d"};
  d.has_n = true;
  d.symmetric = {{"b", "c", "d"}};
  if (!shifted) {
    d.title = reflected ? "terminating 5psi5, z = q^2" : "terminating 5psi5, z = q";
    d.lhs.terms.push_back(series_term(psi("b, c, d, q^(n+1)/(b*c*d), q^-n",
                                          "q/b, q/c, q/d, b*c*d*q^-n, q^(n+1)", reflected ? "q^2" : "q")));
    d.rhs.terms.push_back(product_term(
        Coefficient::one(), {fin("q, q/(b*c), q/(b*d), q/(c*d)", "q/b, q/c, q/d, q/(b*c*d)", 0, 1)}));
  } else {
    d.title = reflected ? "terminating 5psi5, z = q^3" : "terminating 5psi5, z = q, q^2-shifted";
    d.lhs.terms.push_back(series_term(psi("b, c, d, q^(n+3)/(b*c*d), q^-n",
                                          "q^2/b, q^2/c, q^2/d, b*c*d*q^(-n-1), q^(n+2)",
                                          reflected ? "q^3" : "q")));
    d.rhs.terms.push_back(product_term(
        reflected ? Coefficient::sum({"1", "-1/q"}, "(q-1)/q") : Coefficient::sum({"1", "-q"}, "(1-q)"),
        {fin("q^2, q^2/(b*c), q^2/(b*d), q^2/(c*d)", "q^2/b, q^2/c, q^2/d, q^2/(b*c*d)", 0, 1)}));
  }
  return d;
}

IdentityDescriptor theorem_a(std::string id, std::string_view psi_z) {
  IdentityDescriptor d;
  d.id = std::move(id);
  d.title = std::string("7psi7 transformation, z = ") + std::string(psi_z);
  d.free_params = {"b", "c", "d", "e", "f", "g"};
  d.constraint = solve_for("h", "q^2/(b*c*d*e*f*g)", "q^2 = b c d e f g h");
  d.derived = {{"u", Monomial::parse("q/(c*d*e)")}};
  d.lhs.terms.push_back(series_term(thm_a_psi(psi_z)));
  d.lhs.terms.push_back(thm_a_phi8_term());
  d.rhs = thm_a_rhs();
  d.symmetric = {{"c", "d", "e"}, {"f", "g", "h"}};
  return d;
}

IdentityDescriptor theorem_b(std::string id, bool proposition) {
  IdentityDescriptor d;
  d.id = std::move(id);
  d.free_params = {"b", "c", "d", "e", "f", "g"};
  d.constraint = solve_for("h", "q^5/(b*c*d*e*f*g)", "q^5 = b c d e f g h");
  d.derived = {{"v", Monomial::parse("q^3/(c*d*e)")}};
  d.symmetric = {{"c", "d", "e"}, {"f", "g", "h"}};
  if (!proposition) {
    d.title = "7psi7 transformation with q^2 denominators, z = q";
    d.lhs.terms.push_back(series_term(thm_b_psi("q")));
    d.lhs.terms.push_back(product_term(
        Coefficient::one(),
        {inf("q, b/q, c, d, e, f, g, h, b*q/c, b*q/d, b*q/e, b*q/f, b*q/g, b*q/h",
             "b^2, q/b, q^2/c, q^2/d, q^2/e, q^2/f, q^2/g, q^2/h, b*c/q, b*d/q, b*e/q, b*f/q, b*g/q, b*h/q")},
        thm_b_phi9()));
    d.rhs.terms.push_back(thm_b_v_term(Coefficient::one()));
    d.rhs.terms.push_back(thm_b_w_term(Coefficient::one()));
  } else {
    d.title = "7psi7 transformation with q^2 denominators, z = q^3 (sums to zero)";
    d.lhs.terms.push_back(series_term(thm_b_psi("q^3")));
    d.lhs.terms.push_back(product_term(
        Coefficient::of("b/q^2"),
        {inf("q, b, c, d, e, f, g, h, b*q/c, b*q/d, b*q/e, b*q/f, b*q/g, b*q/h",
             "b^2, q^2/b, q^2/c, q^2/d, q^2/e, q^2/f, q^2/g, q^2/h, b*c/q, b*d/q, b*e/q, b*f/q, b*g/q, b*h/q")},
        thm_b_phi9()));
    d.lhs.terms.push_back(thm_b_v_term(Coefficient::of("1/q")));
    d.lhs.terms.push_back(thm_b_w_term(Coefficient::of("1/q")));
  }
  return d;
}

IdentityDescriptor corollary_mu(std::string id, std::string_view psi_z) {
  IdentityDescriptor d;
  d.id = std::move(id);
  d.title = std::string("5psi5 to 8phi7, z = ") + std::string(psi_z);
  d.free_params = {"b", "c", "d", "e", "f"};
  d.derived = {{"mu", Monomial::parse("q/(b*c*d)")}};
  d.conditions = {cond("q^2/bcdef", "q^2/(b*c*d*e*f)"), cond("q/ef", "q/(e*f)")};
  d.lhs.terms.push_back(series_term(psi("b, c, d, e, f", "q/b, q/c, q/d, q/e, q/f", psi_z)));
  d.rhs.terms.push_back(product_term(
      Coefficient::one(), {inf("q, q/(e*f), mu*q/e, mu*q/f", "q/e, q/f, mu*q/(e*f), mu*q")},
      phi("mu, q*sqrt(mu), -q*sqrt(mu), mu*b, mu*c, mu*d, e, f",
          "sqrt(mu), -sqrt(mu), q/b, q/c, q/d, mu*q/e, mu*q/f", "q/(e*f)")));
  d.symmetric = {{"b", "c", "d"}, {"e", "f"}};
  return d;
}

IdentityDescriptor corollary_b(std::string id, std::string_view psi_z) {
  IdentityDescriptor d;
  d.id = std::move(id);
  d.title = std::string("5psi5 to 6phi5, z = ") + std::string(psi_z);
  d.free_params = {"b", "c", "d", "e"};
  d.constraint = solve_for("f", "q/(b*c*d*e)", "q = b c d e f");
  d.lhs.terms.push_back(series_term(psi("b, c, d, e, f", "q/b, q/c, q/d, q/e, q/f", psi_z)));
  d.rhs.terms.push_back(product_term(
      Coefficient::of("b"),
      {inf("q, b*q, c, d, e, f, b*q/c, b*q/d, b*q/e, b*q/f", "b^2*q, q/b, q/c, q/d, q/e, q/f, b*c, b*d, b*e, b*f")},
      phi("b^2, -q*b, b*c, b*d, b*e, b*f", "-b, b*q/c, b*q/d, b*q/e, b*q/f", "q")));
  d.rhs.terms.push_back(product_term(
      Coefficient::one(), {inf("q, b, q/(c*d), q/(c*e), q/(c*f), q/(d*e), q/(d*f), q/(e*f)",
                               "q/c, q/d, q/e, q/f, b*c, b*d, b*e, b*f")}));
  d.symmetric = {{"c", "d", "e", "f"}};
  return d;
}

IdentityDescriptor corollary_th(std::string id, bool proposition) {
  IdentityDescriptor d;
  d.id = std::move(id);
  d.free_params = {"b", "c", "d", "e", "f"};
  d.derived = {{"th", Monomial::parse("q^3/(b*c*d)")}};
  d.conditions = {cond("q^4/bcdef", "q^4/(b*c*d*e*f)"), cond("q^2/ef", "q^2/(e*f)")};
  d.symmetric = {{"b", "c", "d"}, {"e", "f"}};
  Term right = product_term(
      proposition ? Coefficient::of("1/q") : Coefficient::one(),
      {inf("q, q^2/(e*f), th*q/e, th*q/f", "q^2/e, q^2/f, th*q/(e*f), th*q")},
      phi("th, q*sqrt(th), -q*sqrt(th), th*b/q, th*c/q, th*d/q, e, f",
          "sqrt(th), -sqrt(th), q^2/b, q^2/c, q^2/d, th*q/e, th*q/f", "q^2/(e*f)"));
  const char* z = proposition ? "q^6/(b*c*d*e*f)" : "q^4/(b*c*d*e*f)";
  d.title = std::string("5psi5 to 8phi7 with q^2 denominators, z = ") + z;
  d.lhs.terms.push_back(series_term(psi("b, c, d, e, f", "q^2/b, q^2/c, q^2/d, q^2/e, q^2/f", z)));
  if (proposition)
    d.lhs.terms.push_back(std::move(right));
  else
    d.rhs.terms.push_back(std::move(right));
  return d;
}

IdentityDescriptor corollary_d(std::string id, bool proposition) {
  IdentityDescriptor d;
  d.id = std::move(id);
  d.free_params = {"b", "c", "d", "e"};
  d.constraint = solve_for("f", "q^3/(b*c*d*e)", "q^3 = b c d e f");
  d.symmetric = {{"c", "d", "e", "f"}};
  Term first = product_term(
      Coefficient::of(proposition ? "b/q^2" : "b/q"),
      {inf("q, b, c, d, e, f, b*q/c, b*q/d, b*q/e, b*q/f",
           "b^2, q^2/b, q^2/c, q^2/d, q^2/e, q^2/f, b*c/q, b*d/q, b*e/q, b*f/q")},
      phi("b^2/q, b*sqrt(q), -b*sqrt(q), b*c/q, b*d/q, b*e/q, b*f/q",
          "b/sqrt(q), -b/sqrt(q), b*q/c, b*q/d, b*q/e, b*q/f", "q"));
  Term second = product_term(
      proposition ? Coefficient::of("1/q") : Coefficient::one(),
      {inf("q, b/q, q^2/(c*d), q^2/(c*e), q^2/(c*f), q^2/(d*e), q^2/(d*f), q^2/(e*f)",
           "q^2/c, q^2/d, q^2/e, q^2/f, b*c/q, b*d/q, b*e/q, b*f/q")});
  const char* z = proposition ? "q^3" : "q";
  d.title = std::string("5psi5 to 7phi6 with q^2 denominators, z = ") + z;
  d.lhs.terms.push_back(series_term(psi("b, c, d, e, f", "q^2/b, q^2/c, q^2/d, q^2/e, q^2/f", z)));
  Expression& right = proposition ? d.lhs : d.rhs;
  right.terms.push_back(std::move(first));
  right.terms.push_back(std::move(second));
  return d;
}

std::vector<IdentityDescriptor> build() {
  std::vector<IdentityDescriptor> c;
  c.push_back(four_term());
  c.push_back(p33("p33-a", false, false));
  c.push_back(p33("p33-b", true, false));
  c.push_back(p33("p33-c", false, true));
  c.push_back(p33("p33-d", true, true));
  c.push_back(p55("p55-a", false, false));
  c.push_back(p55("p55-b", true, false));
  c.push_back(p55("p55-c", false, true));
  c.push_back(p55("p55-d", true, true));
  c.push_back(theorem_a("thm-a", "q"));
  c.push_back(theorem_b("thm-b", false));
  c.push_back(corollary_mu("corl-a", "q^2/(b*c*d*e*f)"));
  c.push_back(corollary_b("corl-b", "q"));
  c.push_back(corollary_th("corl-c", false));
  c.push_back(corollary_d("corl-d", false));
  c.push_back(corollary_mu("corl-e", "q^3/(b*c*d*e*f)"));
  c.push_back(corollary_b("corl-f", "q^2"));
  c.push_back(corollary_th("corl-g", true));
  c.push_back(corollary_d("corl-h", true));
  c.push_back(theorem_a("prop-a", "q^2"));
  c.push_back(theorem_b("prop-b", true));
  return c;
}

}  // namespace

std::vector<std::string> IdentityDescriptor::params() const {
  std::vector<std::string> r = free_params;
  if (constraint) r.push_back(constraint->solved);
  return r;
}

const std::vector<IdentityDescriptor>& catalog() {
  static const std::vector<IdentityDescriptor> c = build();
  return c;
}

const IdentityDescriptor& find_identity(std::string_view id) {
  const auto& c = catalog();
  const auto it = std::find_if(c.begin(), c.end(), [&](const IdentityDescriptor& d) { return d.id == id; });
  if (it == c.end()) throw ConfigError("unknown identity '" + std::string(id) + "'");
  return *it;
}

}  // namespace qseries
