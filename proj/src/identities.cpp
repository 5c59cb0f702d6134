// SPDX-License-Identifier: Apache-2.0
#include "qseries/identities.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include "qseries/errors.hpp"

namespace qseries {

namespace {

using cd = std::complex<double>;

constexpr long kScanLimit = 20000;
constexpr long kPowerScan = 64;
constexpr long kOpen = std::numeric_limits<long>::max();

std::string describe(const QSeriesError& e) { return std::string(e.kind()) + ": " + e.what(); }

double approx_abs(const Scalar& x) { return std::hypot(x.re_approx(), x.im_approx()); }

cd approx(const Scalar& x) { return {x.re_approx(), x.im_approx()}; }

/// Smallest |1 - x q^k| over k in [k0, k1]; an open end scans until the
/// factors are certainly far from zero.
struct Scan {
  double min = INFINITY;
  long at = 0;
};

Scan scan_forward(cd x, cd q, long k0, long k1, double margin) {
  Scan s;
  const bool open = k1 == kOpen;
  const long end = open ? k0 + kScanLimit : k1;
  cd t = x * std::pow(q, static_cast<int>(k0));
  for (long k = k0; k <= end; ++k) {
    const double f = std::abs(1.0 - t);
    if (f < s.min) s = {f, k};
    if (open && std::abs(t) < margin / 2) break;
    t *= q;
  }
  return s;
}

Scan scan_backward(cd x, cd q, std::optional<long> j0) {
  Scan s;
  cd t = x / q;
  for (long j = -1; j0 ? j >= *j0 : j > -kScanLimit; --j) {
    const double f = std::abs(1.0 - t);
    if (f < s.min) s = {f, j};
    if (!j0 && std::abs(t) > 2.0) break;
    t /= q;
  }
  return s;
}

/// m with x = q^m (in double precision) for |m| <= 64.
std::optional<long> approx_power(cd x, cd q, long lo, long hi) {
  for (long m = lo; m <= hi; ++m) {
    const cd qm = std::pow(q, static_cast<int>(m));
    if (std::abs(x - qm) <= 1e-9 * std::max(1.0, std::abs(qm))) return m;
  }
  return std::nullopt;
}

struct ApproxEnv {
  ComplexMap values;
  long n = 0;
  cd q;
};

std::string at_k(const std::string& what, const Monomial& m, long k) {
  return "near-singular factor 1 - (" + m.text + ") q^" + std::to_string(k) + " in " + what;
}

void check_series(const SeriesTemplate& t, const ApproxEnv& env, const AdmissibilityOptions& opts,
                  Admissibility& out) {
  std::vector<cd> a;
  std::vector<cd> b;
  for (const Monomial& m : t.numer) a.push_back(evaluate_approx(m, env.values, env.n));
  for (const Monomial& m : t.denom) b.push_back(evaluate_approx(m, env.values, env.n));
  const cd z = evaluate_approx(t.z, env.values, env.n);
  const cd q = env.q;

  std::optional<long> kmax;
  for (const cd& x : a)
    if (auto m = approx_power(x, q, -kPowerScan, 0)) kmax = kmax ? std::min(*kmax, -*m) : -*m;
  std::optional<long> kmin;
  if (t.kind == SeriesKind::bilateral)
    for (const cd& x : b)
      if (auto m = approx_power(x, q, 1, kPowerScan)) kmin = kmin ? std::max(*kmin, 1 - *m) : 1 - *m;

  const char* what = t.kind == SeriesKind::unilateral ? "phi" : "psi";
  const long last = kmax ? *kmax - 1 : kOpen;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Scan s = scan_forward(b[i], q, 0, last, opts.singular_margin);
    if (s.min < opts.singular_margin) {
      out = {false, at_k(std::string(what) + " denominator", t.denom[i], s.at)};
      return;
    }
  }
  if (t.kind == SeriesKind::unilateral) {
    if (kmax) return;
    const long excess = static_cast<long>(b.size()) - static_cast<long>(a.size()) + 1;
    if (excess < 0 || (excess == 0 && std::abs(z) >= opts.convergence))
      out = {false, "phi argument |" + t.z.text + "| >= 1"};
    return;
  }
  if (std::abs(z) == 0.0) {
    out = {false, "psi argument is zero"};
    return;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Scan s = scan_backward(a[i], q, kmin);
    if (s.min < opts.singular_margin) {
      out = {false, at_k("psi backward numerator", t.numer[i], s.at)};
      return;
    }
  }
  if (!kmax && std::abs(z) >= opts.convergence) {
    out = {false, "psi forward ratio |" + t.z.text + "| >= 1"};
    return;
  }
  if (!kmin) {
    cd pb(1);
    cd pa(1);
    for (const cd& x : b) pb *= x;
    for (const cd& x : a) pa *= x;
    if (std::abs(pb / (pa * z)) >= opts.convergence) out = {false, "psi backward ratio >= 1"};
  }
}

void check_bracket(const Bracket& br, const ApproxEnv& env, const AdmissibilityOptions& opts,
                   Admissibility& out) {
  const Order o = br.order(env.n);
  // Divisor factors: denominators for positive or infinite order,
  // numerators for negative order.
  const bool negative = !o.infinite && o.n < 0;
  const auto& divisors = negative ? br.numer : br.denom;
  for (const Monomial& m : divisors) {
    const cd x = evaluate_approx(m, env.values, env.n);
    Scan s;
    if (o.infinite)
      s = scan_forward(x, env.q, 0, kOpen, opts.singular_margin);
    else if (!negative && o.n > 0)
      s = scan_forward(x, env.q, 0, o.n - 1, opts.singular_margin);
    else if (negative)
      s = scan_forward(x, env.q, o.n, -1, opts.singular_margin);
    if (s.min < opts.singular_margin) {
      out = {false, at_k("bracket", m, s.at)};
      return;
    }
  }
}

Mag sum_lower(const std::vector<Scalar>& xs) {
  Mag r;
  for (const Scalar& x : xs) r = add_down(r, x.abs_lower());
  return r;
}

Mag sum_upper(const std::vector<Scalar>& xs) {
  Mag r;
  for (const Scalar& x : xs) r += x.abs_upper();
  return r;
}

Scalar side_value(const Expression& e, const Bindings& b, const EvalOptions& opts, const char* side,
                  std::vector<Scalar>& terms, long& used) {
  Scalar sum(0);
  for (std::size_t i = 0; i < e.terms.size(); ++i) {
    try {
      const TermValue v = evaluate(e.terms[i], b, opts);
      sum += v.value;
      terms.push_back(v.value);
      used += v.terms_used;
    } catch (QSeriesError& err) {
      err.add_context(std::string(side) + " term " + std::to_string(i + 1));
      throw;
    }
  }
  return sum;
}

const Scalar& value_of(const ParamSet& p, const std::string& name) {
  const auto it = p.values.find(name);
  if (it == p.values.end()) throw ConfigError("missing parameter '" + name + "'");
  return it->second;
}

std::vector<Scalar> values_of(const ParamSet& p, std::initializer_list<const char*> names) {
  std::vector<Scalar> r;
  for (const char* n : names) r.push_back(value_of(p, n));
  return r;
}

bool is_theorem_a(const std::string& id) {
  if (id == "thm-a") return true;
  if (id == "thm-b") return false;
  throw ConfigError("expected thm-a or thm-b, got '" + id + "'");
}

/// (b..h; q/b..q/h) for thm-a, (b..h; q^2/b..q^2/h) for thm-b.
std::pair<std::vector<Scalar>, std::vector<Scalar>> theorem_psi_params(const ParamSet& p, bool a_type) {
  const Scalar& q = value_of(p, "q");
  const Scalar top = a_type ? q : q * q;
  auto numer = values_of(p, {"b", "c", "d", "e", "f", "g", "h"});
  std::vector<Scalar> denom;
  for (const Scalar& x : numer) denom.push_back(top / x);
  return {numer, denom};
}

}  // namespace

std::string ParamSet::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : values) {
    os << (first ? "" : ", ") << k << "=" << v.to_string(12);
    first = false;
  }
  os << ", n=" << n;
  return os.str();
}

ParamSet solve_params(const IdentityDescriptor& id, const std::map<std::string, Scalar>& free,
                      const Scalar& q, long n) {
  ParamSet p;
  p.n = n;
  if (q.may_be_zero()) throw DomainError("q must be nonzero");
  p.values["q"] = q;
  for (const std::string& name : id.free_params) {
    const auto it = free.find(name);
    if (it == free.end()) throw ConfigError(id.id + ": missing free parameter '" + name + "'");
    if (it->second.may_be_zero()) throw DomainError(id.id + ": parameter " + name + " is zero");
    p.values[name] = it->second;
  }
  if (id.constraint) {
    Bindings b(Precision{128}, n);
    for (const auto& [k, v] : p.values) b.set(k, v);
    p.values[id.constraint->solved] = evaluate(id.constraint->formula, b);
  }
  return p;
}

Bindings bind(const IdentityDescriptor& id, const ParamSet& params, Precision p) {
  Bindings b(p, params.n);
  for (const auto& [k, v] : params.values) b.set(k, v);
  for (const DerivedSymbol& d : id.derived) b.set(d.name, evaluate(d.formula, b));
  return b;
}

Admissibility admissible(const IdentityDescriptor& id, const ParamSet& params, const AdmissibilityOptions& opts) {
  ApproxEnv env;
  env.n = params.n;
  for (const auto& [k, v] : params.values) {
    if (approx_abs(v) == 0.0) return {false, "parameter " + k + " is zero"};
    env.values[k] = approx(v);
  }
  env.q = env.values.at("q");
  if (std::abs(env.q) >= opts.convergence) return {false, "|q| >= 1"};
  for (const DerivedSymbol& d : id.derived) {
    const cd v = evaluate_approx(d.formula, env.values, env.n);
    if (std::abs(v) == 0.0) return {false, "derived " + d.name + " is zero"};
    env.values[d.name] = v;
  }
  for (const Condition& c : id.conditions)
    if (std::abs(evaluate_approx(c.value, env.values, env.n)) >= opts.convergence)
      return {false, "|" + c.display + "| >= 1"};

  Admissibility out;
  for (const Expression* e : {&id.lhs, &id.rhs}) {
    for (const Term& t : e->terms) {
      for (const Bracket& br : t.brackets) {
        check_bracket(br, env, opts, out);
        if (!out.ok) return out;
      }
      if (t.series) {
        check_series(*t.series, env, opts, out);
        if (!out.ok) return out;
      }
    }
  }
  return out;
}

double SideValues::abs_err() const { return approx_abs(residual); }

double SideValues::rel_err() const {
  const double s = std::max(scale_lo.to_double(), 1e-300);
  return abs_err() / s;
}

double SideValues::radius() const { return residual.radius().to_double(); }

SideValues eval_sides(const IdentityDescriptor& id, const Bindings& b, const EvalOptions& opts) {
  SideValues v;
  v.precision = opts.precision;
  std::vector<Scalar> lt;
  std::vector<Scalar> rt;
  v.lhs = side_value(id.lhs, b, opts, "lhs", lt, v.terms_used);
  v.rhs = side_value(id.rhs, b, opts, "rhs", rt, v.terms_used);
  v.residual = v.lhs - v.rhs;
  v.scale_lo = max(sum_lower(lt), sum_lower(rt));
  v.scale_up = max(sum_upper(lt), sum_upper(rt));
  return v;
}

SideValues eval_sides(const IdentityDescriptor& id, const ParamSet& params, const EvalOptions& opts) {
  return eval_sides(id, bind(id, params, opts.precision), opts);
}

const char* to_string(Status s) {
  switch (s) {
    case Status::pass:
      return "pass";
    case Status::fail:
      return "fail";
    case Status::inconclusive:
      return "inconclusive";
    case Status::rejected:
      return "rejected";
  }
  return "?";
}

std::optional<Status> decide(const SideValues& v, double rel_tol) {
  if (v.residual.is_exact()) return v.residual.exact().is_zero() ? Status::pass : Status::fail;
  const Mag tol = Mag::from_double(rel_tol);
  if (v.residual.abs_upper() < mul_down(tol, v.scale_lo)) return Status::pass;
  if (v.residual.abs_lower() > tol * v.scale_up) return Status::fail;
  return std::nullopt;
}

Certification certify(const IdentityDescriptor& id, const ParamSet& params, const CertifyOptions& opts) {
  return certify_with([&](const EvalOptions& eo) { return eval_sides(id, params, eo); }, opts);
}

Certification certify_with(const std::function<SideValues(const EvalOptions&)>& eval, const CertifyOptions& opts) {
  Certification c;
  const Mag rel = Mag::from_double(opts.rel_tol);
  for (std::size_t i = 0; i < opts.ladder.size(); ++i) {
    const long bits = opts.ladder[i];
    const bool last = i + 1 == opts.ladder.size();
    EvalOptions eo;
    eo.precision = Precision{bits};
    eo.max_terms = opts.max_terms;
    // A rung whose truncation target cannot reach rel_tol is skipped.
    if (!last && eo.effective_tol() >= rel) continue;
    try {
      c.values = eval(eo);
    } catch (const PrecisionError& e) {
      c.diagnostic = describe(e);
      if (last) {
        c.status = Status::rejected;
        return c;
      }
      continue;
    } catch (const QSeriesError& e) {
      c.status = Status::rejected;
      c.diagnostic = describe(e);
      return c;
    }
    c.diagnostic.clear();
    if (auto s = decide(*c.values, opts.rel_tol)) {
      c.status = *s;
      return c;
    }
  }
  c.status = Status::inconclusive;
  if (c.diagnostic.empty()) c.diagnostic = "residual ball straddles the threshold at the precision cap";
  return c;
}

LimitResult limit_consistency(const std::string& theorem, const ParamSet& params, const ExactRational& eps,
                              const EvalOptions& opts) {
  const bool a_type = is_theorem_a(theorem);
  if (eps.is_zero()) throw DomainError("limit_consistency needs eps != 0; eps = 0 is the theorem itself");
  const IdentityDescriptor& thm = find_identity(theorem);
  const IdentityDescriptor& four = find_identity("four-term");
  const Scalar& q = value_of(params, "q");
  std::map<std::string, Scalar> free;
  for (const char* s : {"b", "c", "d", "e", "f", "g"}) free[s] = value_of(params, s);
  const Scalar one_eps = Scalar(ExactRational(1) + eps);
  free["a"] = a_type ? one_eps : q * one_eps;
  const ParamSet fp = solve_params(four, free, q);

  const SideValues base = eval_sides(four, fp, opts);
  const SideValues lim = eval_sides(thm, params, opts);
  const Scalar f = a_type ? Scalar(1) : Scalar(1) - q;
  const Scalar dl = f * base.lhs - lim.lhs;
  const Scalar dr = f * base.rhs - lim.rhs;
  LimitResult r;
  r.value = approx_abs(dl) + approx_abs(dr);
  r.lower = add_down(dl.abs_lower(), dr.abs_lower());
  r.upper = dl.abs_upper() + dr.abs_upper();
  return r;
}

FoldResult fold_check(const std::string& theorem, const ParamSet& params, const EvalOptions& opts) {
  const bool a_type = is_theorem_a(theorem);
  const Scalar& q = value_of(params, "q");
  auto [numer, denom] = theorem_psi_params(params, a_type);

  SeriesSpec bil{SeriesKind::bilateral, numer, denom, q, q};
  // Prepending q to the numerator cancels the (q;q)_k of the phi series.
  std::vector<Scalar> phi_numer{q};
  phi_numer.insert(phi_numer.end(), numer.begin(), numer.end());
  auto phi_at = [&](const Scalar& z) {
    return phi_eval(SeriesSpec{SeriesKind::unilateral, phi_numer, denom, q, z}, opts).value;
  };

  FoldResult r;
  r.bilateral = psi_eval(bil, opts).value;
  if (a_type)
    r.folded = phi_at(q) + phi_at(q * q) - Scalar(1);
  else
    r.folded = phi_at(q) - q * phi_at(q * q * q);
  r.residual = r.folded - r.bilateral;
  return r;
}

std::pair<ExactRational, ExactRational> fold_partial_sums(const std::string& theorem, const ParamSet& params,
                                                          long K) {
  const bool a_type = is_theorem_a(theorem);
  for (const auto& [k, v] : params.values)
    if (!v.is_exact()) throw DomainError("fold_partial_sums needs exact parameters");
  const ExactRational q = value_of(params, "q").exact();
  auto [numer, denom] = theorem_psi_params(params, a_type);
  const Precision p{64};
  auto term = [&](long k) {
    return qfac_ratio(numer, denom, Scalar(q), Order::finite(k), p, Mag()).exact();
  };
  ExactRational folded;
  ExactRational bilateral;
  for (long k = 0; k <= K; ++k) {
    const ExactRational t = term(k);
    if (a_type)
      folded += k == 0 ? ExactRational(1) : (ExactRational(1) + pow(q, k)) * t * pow(q, k);
    else
      folded += (ExactRational(1) - pow(q, 1 + 2 * k)) * t * pow(q, k);
  }
  const long lo = a_type ? -K : -K - 1;
  for (long k = lo; k <= K; ++k) bilateral += term(k) * pow(q, k);
  return {folded, bilateral};
}

const std::vector<Reduction>& reductions() {
  static const std::vector<Reduction> r{{"corl-a", "p33-a"}, {"corl-b", "p55-a"}, {"corl-c", "p33-b"},
                                        {"corl-d", "p55-b"}, {"corl-e", "p33-c"}, {"corl-f", "p55-c"},
                                        {"corl-g", "p33-d"}, {"corl-h", "p55-d"}};
  return r;
}

ParamSet specialize(const Reduction& r, const ParamSet& target_params, const Scalar& t) {
  const IdentityDescriptor& corl = find_identity(r.corollary);
  const Scalar& q = value_of(target_params, "q");
  const auto bcd = values_of(target_params, {"b", "c", "d"});
  const bool shifted = r.target == "p33-b" || r.target == "p33-d" || r.target == "p55-b" || r.target == "p55-d";
  std::map<std::string, Scalar> free;
  if (r.target.rfind("p33", 0) == 0) {
    free = {{"b", bcd[0]}, {"c", t}, {"d", (shifted ? q * q : q) / t}, {"e", bcd[1]}, {"f", bcd[2]}};
  } else {
    const long n = target_params.n;
    free = {{"b", bcd[0]}, {"c", bcd[1]}, {"d", bcd[2]},
            {"e", pow(q, n + (shifted ? 3 : 1)) / (bcd[0] * bcd[1] * bcd[2])}};
  }
  return solve_params(corl, free, q);
}

Scalar psi_closed_form(const IdentityDescriptor& id, const ParamSet& params, const EvalOptions& opts) {
  if (id.lhs.terms.empty() || !id.lhs.terms[0].series || id.lhs.terms[0].series->kind != SeriesKind::bilateral)
    throw ConfigError(id.id + " does not start with a bilateral series");
  const Bindings b = bind(id, params, opts.precision);
  Scalar r(0);
  for (const Term& t : id.rhs.terms) r += evaluate(t, b, opts).value;
  for (std::size_t i = 1; i < id.lhs.terms.size(); ++i) r -= evaluate(id.lhs.terms[i], b, opts).value;
  return r;
}

SideValues reduction_sides(const Reduction& r, const ParamSet& target_params, const Scalar& t,
                           const EvalOptions& opts) {
  const ParamSet cp = specialize(r, target_params, t);
  SideValues v;
  v.precision = opts.precision;
  v.lhs = psi_closed_form(find_identity(r.corollary), cp, opts);
  v.rhs = psi_closed_form(find_identity(r.target), target_params, opts);
  v.residual = v.lhs - v.rhs;
  v.scale_lo = max(v.lhs.abs_lower(), v.rhs.abs_lower());
  v.scale_up = max(v.lhs.abs_upper(), v.rhs.abs_upper());
  return v;
}

std::optional<IdentityDescriptor> corrupted(const IdentityDescriptor& id, std::size_t slot) {
  IdentityDescriptor copy = id;
  const ExactRational factor = ExactRational::fraction(1001, 1000);
  std::size_t i = 0;
  for (Expression* e : {&copy.rhs, &copy.lhs}) {
    for (Term& t : e->terms) {
      for (Bracket& br : t.brackets) {
        for (auto* list : {&br.numer, &br.denom}) {
          for (Monomial& m : *list) {
            if (i++ != slot) continue;
            m.coeff *= factor;
            m.text = "1.001*" + m.text;
            copy.title += " (corrupted: " + m.text + ")";
            return copy;
          }
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace qseries
