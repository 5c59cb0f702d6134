// SPDX-License-Identifier: Apache-2.0
#include "qseries/expression.hpp"

#include "qseries/errors.hpp"

namespace qseries {

namespace {

std::string join(const std::vector<Monomial>& ms) {
  std::string r;
  for (const Monomial& m : ms) r += (r.empty() ? "" : ",") + m.text;
  return r;
}

std::vector<Scalar> evaluate_all(const std::vector<Monomial>& ms, const Bindings& b) {
  std::vector<Scalar> r;
  r.reserve(ms.size());
  for (const Monomial& m : ms) r.push_back(evaluate(m, b));
  return r;
}

}  // namespace

Coefficient Coefficient::one() { return {{Monomial::constant(ExactRational(1))}, "1"}; }

Coefficient Coefficient::of(std::string_view mono) { return {{Monomial::parse(mono)}, std::string(mono)}; }

Coefficient Coefficient::sum(std::initializer_list<std::string_view> monos, std::string text) {
  Coefficient c;
  for (std::string_view m : monos) c.terms.push_back(Monomial::parse(m));
  c.text = std::move(text);
  return c;
}

std::vector<Monomial> parse_list(std::string_view src) {
  std::vector<Monomial> r;
  std::size_t start = 0;
  while (start <= src.size()) {
    std::size_t end = src.find(',', start);
    if (end == std::string_view::npos) end = src.size();
    std::string_view item = src.substr(start, end - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) r.push_back(Monomial::parse(item));
    start = end + 1;
  }
  return r;
}

Scalar evaluate(const Coefficient& c, const Bindings& b) {
  Scalar r(0);
  for (const Monomial& m : c.terms) r += evaluate(m, b);
  return r;
}

SeriesSpec instantiate(const SeriesTemplate& t, const Bindings& b) {
  SeriesSpec s;
  s.kind = t.kind;
  s.numer = evaluate_all(t.numer, b);
  s.denom = evaluate_all(t.denom, b);
  s.q = b.get("q");
  s.z = evaluate(t.z, b);
  return s;
}

TermValue evaluate(const Term& t, const Bindings& b, const EvalOptions& opts) {
  TermValue r{evaluate(t.coeff, b), 0};
  if (r.value.is_exact_zero()) return r;
  const Scalar& q = b.get("q");
  for (const Bracket& br : t.brackets) {
    try {
      const auto num = evaluate_all(br.numer, b);
      const auto den = evaluate_all(br.denom, b);
      r.value *= qfac_ratio(num, den, q, br.order(b.n()), opts.precision, opts.effective_tol());
    } catch (QSeriesError& e) {
      e.add_context("bracket [" + join(br.numer) + "; " + join(br.denom) + "]");
      throw;
    }
  }
  if (t.series && !r.value.is_exact_zero()) {
    try {
      const SeriesSpec spec = instantiate(*t.series, b);
      const SeriesValue v =
          t.series->kind == SeriesKind::unilateral ? phi_eval(spec, opts) : psi_eval(spec, opts);
      r.value *= v.value;
      r.terms_used = v.terms_used;
    } catch (QSeriesError& e) {
      e.add_context(std::string(t.series->kind == SeriesKind::unilateral ? "phi" : "psi") + "(" +
                    join(t.series->numer) + "; " + join(t.series->denom) + "; " + t.series->z.text + ")");
      throw;
    }
  }
  return r;
}

}  // namespace qseries
