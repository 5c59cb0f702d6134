// SPDX-License-Identifier: Apache-2.0
#include "qseries/series.hpp"

#include <algorithm>
#include <sstream>

#include "qseries/errors.hpp"

namespace qseries {

namespace {

constexpr long kPowerScan = 64;

const char* kind_name(SeriesKind k) { return k == SeriesKind::unilateral ? "phi" : "psi"; }

/// Divisor check shared by both backends.
void check_divisor(const ExactRational& f, const char* what) {
  if (f.is_zero()) throw PoleError(std::string("vanishing ") + what);
}

void check_divisor(const Ball& f, const char* what) {
  if (f.abs_lower() < singularity_margin(f.precision()))
    throw PrecisionError(std::string(what) + " within the singularity margin");
}

/// The arithmetic backend for one evaluation: exact or balls at fixed P.
template <class T>
struct Params {
  std::vector<T> a;
  std::vector<T> b;
  T q;
  T z;
  T one;
};

Params<ExactRational> exact_params(const SeriesSpec& s) {
  Params<ExactRational> p;
  for (const Scalar& x : s.numer) p.a.push_back(x.exact());
  for (const Scalar& x : s.denom) p.b.push_back(x.exact());
  p.q = s.q.exact();
  p.z = s.z.exact();
  p.one = ExactRational(1);
  return p;
}

Params<Ball> ball_params(const SeriesSpec& s, Precision prec) {
  Params<Ball> p{{}, {}, s.q.to_ball(prec), s.z.to_ball(prec), one(prec)};
  for (const Scalar& x : s.numer) p.a.push_back(x.to_ball(prec));
  for (const Scalar& x : s.denom) p.b.push_back(x.to_ball(prec));
  return p;
}

/// t_{k+1} / t_k for a unilateral series, with qk = q^k.
template <class T>
T phi_ratio(const Params<T>& p, const T& qk, long excess) {
  T num = p.one;
  for (const T& a : p.a) num *= p.one - a * qk;
  T den = p.one - p.q * qk;
  check_divisor(den, "factor 1 - q^(k+1)");
  for (const T& b : p.b) {
    const T f = p.one - b * qk;
    check_divisor(f, "denominator factor 1 - b q^k");
    den *= f;
  }
  T r = num / den * p.z;
  if (excess != 0) r *= pow(-qk, excess);
  return r;
}

/// t_{k+1} / t_k for r psi r.
template <class T>
T psi_forward_ratio(const Params<T>& p, const T& qk) {
  T num = p.one;
  for (const T& a : p.a) num *= p.one - a * qk;
  T den = p.one;
  for (const T& b : p.b) {
    const T f = p.one - b * qk;
    check_divisor(f, "denominator factor 1 - b q^k");
    den *= f;
  }
  return num / den * p.z;
}

/// t_{k-1} / t_k for r psi r at k = -M, with qm1 = q^(M+1). The common
/// factor q^-(M+1) of every 1 - x q^(k-1) cancels.
template <class T>
T psi_backward_ratio(const Params<T>& p, const T& qm1) {
  T num = p.one;
  for (const T& b : p.b) num *= b - qm1;
  T den = p.z;
  check_divisor(den, "argument z");
  for (const T& a : p.a) {
    const T f = a - qm1;
    check_divisor(f, "backward factor 1 - a q^(k-1)");
    den *= f;
  }
  return num / den;
}

Mag mag_one() { return Mag::from_double(1.0); }

/// Bound on |t_{k+1}/t_k| for every k >= K in a unilateral series, given
/// qk >= |q|^K. Returns nullopt when the bound is not yet below 1.
std::optional<Mag> phi_tail_ratio(const std::vector<Mag>& a, const std::vector<Mag>& b, Mag q,
                                  Mag z, Mag qk, long excess) {
  Mag num = z;
  for (const Mag& x : a) num *= add_up(mag_one(), x * qk);
  for (long i = 0; i < excess; ++i) num *= qk;
  Mag den = sub_down(mag_one(), q * qk);
  for (const Mag& x : b) den = mul_down(den, sub_down(mag_one(), x * qk));
  if (den.is_zero()) return std::nullopt;
  const Mag rho = div_up(num, den);
  if (rho >= mag_one()) return std::nullopt;
  return rho;
}

/// Bound on |t_{k-1}/t_k| for every k <= -M, given qm1 >= |q|^(M+1).
std::optional<Mag> psi_back_tail_ratio(const std::vector<Mag>& a_lo, const std::vector<Mag>& b_up,
                                       Mag z_lo, Mag qm1) {
  Mag num;
  num = mag_one();
  for (const Mag& x : b_up) num *= add_up(x, qm1);
  Mag den = z_lo;
  for (const Mag& x : a_lo) den = mul_down(den, sub_down(x, qm1));
  if (den.is_zero()) return std::nullopt;
  const Mag rho = div_up(num, den);
  if (rho >= mag_one()) return std::nullopt;
  return rho;
}

struct Accumulator {
  Ball sum;
  Mag max_term_lo;
  long terms = 0;

  Mag scale() const { return max(sum.abs_lower(), max_term_lo); }
  void add(const Ball& t) {
    sum += t;
    max_term_lo = max(max_term_lo, t.abs_lower());
    ++terms;
  }
};

std::vector<Mag> upper_abs(const std::vector<Scalar>& xs) {
  std::vector<Mag> r;
  for (const Scalar& x : xs) r.push_back(x.abs_upper());
  return r;
}

std::vector<Mag> lower_abs(const std::vector<Scalar>& xs) {
  std::vector<Mag> r;
  for (const Scalar& x : xs) r.push_back(x.abs_lower());
  return r;
}

[[noreturn]] void budget_exceeded(const char* side, long max_terms) {
  throw BudgetError(std::string(side) + " side did not reach tolerance within " +
                    std::to_string(max_terms) + " terms");
}

void require_psi_shape(const SeriesSpec& s) {
  if (s.kind != SeriesKind::bilateral) throw DomainError("expected a bilateral spec");
  if (s.numer.size() != s.denom.size())
    throw DomainError("bilateral series need as many numerator as denominator parameters");
}

/// Smallest match of x = q^m over |m| <= kPowerScan with m in [lo, hi].
std::optional<long> q_power(const Scalar& x, const std::vector<Scalar>& powers, long lo, long hi,
                            Precision p) {
  if (x.is_exact_zero()) return std::nullopt;
  const Mag delta = singularity_margin(p);
  for (long m = lo; m <= hi; ++m) {
    const Scalar& qm = powers[static_cast<std::size_t>(m + kPowerScan)];
    if (x.is_exact() && qm.is_exact()) {
      if (x.exact() == qm.exact()) return m;
      continue;
    }
    const Ball d = x.to_ball(p) - qm.to_ball(p);
    if (d.abs_upper() < delta) return m;
  }
  return std::nullopt;
}

std::vector<Scalar> q_powers(const Scalar& q, Precision p) {
  std::vector<Scalar> r(2 * kPowerScan + 1);
  const Scalar base = q.is_exact() ? q : Scalar(q.to_ball(p));
  const std::size_t mid = kPowerScan;
  r[mid] = Scalar(1);
  const bool invertible = !base.may_be_zero();
  for (long m = 1; m <= kPowerScan; ++m) {
    r[mid + m] = r[mid + m - 1] * base;
    r[mid - m] = invertible ? r[mid - m + 1] / base : Scalar(0);
  }
  return r;
}

Scalar product(const std::vector<Scalar>& xs) {
  Scalar r(1);
  for (const Scalar& x : xs) r *= x;
  return r;
}

SeriesValue phi_exact(const SeriesSpec& spec, long kmax) {
  const auto p = exact_params(spec);
  const long excess = static_cast<long>(p.b.size()) - static_cast<long>(p.a.size()) + 1;
  ExactRational term(1);
  ExactRational sum(1);
  ExactRational qk(1);
  for (long k = 0; k < kmax; ++k) {
    term *= phi_ratio(p, qk, excess);
    sum += term;
    qk *= p.q;
  }
  return {Scalar(sum), kmax + 1};
}

SeriesValue psi_exact(const SeriesSpec& spec, long kmin, long kmax) {
  const auto p = exact_params(spec);
  ExactRational sum(1);
  ExactRational term(1);
  ExactRational qk(1);
  for (long k = 0; k < kmax; ++k) {
    term *= psi_forward_ratio(p, qk);
    sum += term;
    qk *= p.q;
  }
  term = ExactRational(1);
  ExactRational qm1 = p.q;
  for (long k = 0; k > kmin; --k) {
    term *= psi_backward_ratio(p, qm1);
    sum += term;
    qm1 *= p.q;
  }
  return {Scalar(sum), kmax - kmin + 1};
}

}  // namespace

bool SeriesSpec::all_exact() const {
  auto exact = [](const Scalar& x) { return x.is_exact(); };
  return std::all_of(numer.begin(), numer.end(), exact) &&
         std::all_of(denom.begin(), denom.end(), exact) && q.is_exact() && z.is_exact();
}

std::string SeriesSpec::to_string(int digits) const {
  std::ostringstream os;
  auto list = [&](const std::vector<Scalar>& xs) {
    for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? ", " : "") << xs[i].to_string(digits);
  };
  os << kind_name(kind) << "(";
  list(numer);
  os << "; ";
  list(denom);
  os << "; q=" << q.to_string(digits) << ", z=" << z.to_string(digits) << ")";
  return os.str();
}

Mag convergence_threshold() { return sub_down(mag_one(), Mag::pow2(-16)); }

TermRange term_range(const SeriesSpec& spec, Precision p) {
  const auto powers = q_powers(spec.q, p);
  TermRange r;
  for (const Scalar& a : spec.numer) {
    if (auto m = q_power(a, powers, -kPowerScan, 0, p)) {
      const long n = -*m;
      r.kmax = r.kmax ? std::min(*r.kmax, n) : n;
    }
  }
  if (spec.kind == SeriesKind::unilateral) {
    r.kmin = 0;
    return r;
  }
  for (const Scalar& b : spec.denom) {
    if (auto m = q_power(b, powers, 1, kPowerScan, p)) {
      const long lo = 1 - *m;
      r.kmin = r.kmin ? std::max(*r.kmin, lo) : lo;
    }
  }
  return r;
}

BilateralRatios bilateral_ratios(const SeriesSpec& spec) {
  require_psi_shape(spec);
  BilateralRatios r;
  r.forward = spec.z.abs_upper();
  Mag num = mag_one();
  for (const Scalar& b : spec.denom) num *= b.abs_upper();
  Mag den = spec.z.abs_lower();
  for (const Scalar& a : spec.numer) den = mul_down(den, a.abs_lower());
  r.backward = den.is_zero() ? Mag::pow2(1L << 40) : div_up(num, den);
  return r;
}

SeriesValue phi_eval(const SeriesSpec& spec, const EvalOptions& opts) {
  if (spec.kind != SeriesKind::unilateral) throw DomainError("expected a unilateral spec");
  if (spec.numer.empty()) throw DomainError("unilateral series need a numerator parameter");
  const Precision prec = opts.precision;
  const TermRange range = term_range(spec, prec);
  if (range.kmax && spec.all_exact()) return phi_exact(spec, *range.kmax);

  const long excess = static_cast<long>(spec.denom.size()) - static_cast<long>(spec.numer.size()) + 1;
  const Mag q_up = spec.q.abs_upper();
  if (q_up >= mag_one()) throw DomainError("phi needs |q| < 1");
  if (!range.kmax) {
    if (excess < 0) throw DivergenceError("nonterminating phi with more numerator than denominator parameters");
    if (excess == 0 && spec.z.abs_upper() >= convergence_threshold())
      throw DivergenceError("ratio test does not certify convergence: |z| = " + spec.z.to_string(8));
  }

  const auto p = ball_params(spec, prec);
  const auto a_up = upper_abs(spec.numer);
  const auto b_up = upper_abs(spec.denom);
  const Mag z_up = spec.z.abs_upper();
  const Mag tol = opts.effective_tol();

  Accumulator acc{p.one, mag_one(), 1};
  Ball term = p.one;
  Ball qk = p.one;
  Mag qk_up = mag_one();
  for (long k = 0;; ++k) {
    if (range.kmax && k == *range.kmax) return {Scalar(acc.sum), acc.terms};
    if (!range.kmax) {
      if (auto rho = phi_tail_ratio(a_up, b_up, q_up, z_up, qk_up, excess)) {
        const Mag tail = div_up(term.abs_upper() * *rho, sub_down(mag_one(), *rho));
        if (tail <= mul_down(tol, acc.scale())) {
          acc.sum.add_error(tail);
          return {Scalar(acc.sum), acc.terms};
        }
      }
    }
    if (k >= opts.max_terms) budget_exceeded("phi", opts.max_terms);
    term *= phi_ratio(p, qk, excess);
    acc.add(term);
    qk *= p.q;
    qk_up = qk_up * q_up;
  }
}

SeriesValue psi_eval(const SeriesSpec& spec, const EvalOptions& opts) {
  require_psi_shape(spec);
  const Precision prec = opts.precision;
  const TermRange range = term_range(spec, prec);
  if (range.kmin && range.kmax && *range.kmin > *range.kmax) return {Scalar(0), 0};
  if (range.finite() && spec.all_exact()) return psi_exact(spec, *range.kmin, *range.kmax);

  const Mag q_up = spec.q.abs_upper();
  if (q_up >= mag_one()) throw DomainError("psi needs |q| < 1");
  const BilateralRatios ratios = bilateral_ratios(spec);
  if (!range.kmax && ratios.forward >= convergence_threshold())
    throw DivergenceError("forward ratio test does not certify convergence");
  if (!range.kmin && ratios.backward >= convergence_threshold())
    throw DivergenceError("backward ratio test does not certify convergence");

  const auto p = ball_params(spec, prec);
  const auto a_up = upper_abs(spec.numer);
  const auto a_lo = lower_abs(spec.numer);
  const auto b_up = upper_abs(spec.denom);
  const Mag z_up = spec.z.abs_upper();
  const Mag z_lo = spec.z.abs_lower();
  const Mag tol = opts.effective_tol();

  Accumulator acc{p.one, mag_one(), 1};
  // k >= 0: the r psi r forward ratio is the phi ratio without 1 - q^(k+1).
  Ball term = p.one;
  Ball qk = p.one;
  Mag qk_up = mag_one();
  for (long k = 0;; ++k) {
    if (range.kmax && k == *range.kmax) break;
    if (!range.kmax) {
      Mag num = z_up;
      for (const Mag& x : a_up) num *= add_up(mag_one(), x * qk_up);
      Mag den = mag_one();
      for (const Mag& x : b_up) den = mul_down(den, sub_down(mag_one(), x * qk_up));
      if (!den.is_zero()) {
        const Mag rho = div_up(num, den);
        if (rho < mag_one()) {
          const Mag tail = div_up(term.abs_upper() * rho, sub_down(mag_one(), rho));
          if (tail <= mul_down(tol, acc.scale())) {
            acc.sum.add_error(tail);
            break;
          }
        }
      }
    }
    if (k >= opts.max_terms) budget_exceeded("psi forward", opts.max_terms);
    term *= psi_forward_ratio(p, qk);
    acc.add(term);
    qk *= p.q;
    qk_up = qk_up * q_up;
  }

  term = p.one;
  Ball qm1 = p.q;
  Mag qm1_up = q_up;
  for (long k = 0;; --k) {
    if (range.kmin && k == *range.kmin) break;
    if (!range.kmin) {
      if (auto rho = psi_back_tail_ratio(a_lo, b_up, z_lo, qm1_up)) {
        const Mag tail = div_up(term.abs_upper() * *rho, sub_down(mag_one(), *rho));
        if (tail <= mul_down(tol, acc.scale())) {
          acc.sum.add_error(tail);
          break;
        }
      }
    }
    if (-k >= opts.max_terms) budget_exceeded("psi backward", opts.max_terms);
    term *= psi_backward_ratio(p, qm1);
    acc.add(term);
    qm1 *= p.q;
    qm1_up = qm1_up * q_up;
  }
  return {Scalar(acc.sum), acc.terms};
}

SeriesSpec reflect_params(const SeriesSpec& spec) {
  require_psi_shape(spec);
  SeriesSpec r;
  r.kind = SeriesKind::bilateral;
  r.q = spec.q;
  for (const Scalar& b : spec.denom) r.numer.push_back(spec.q / b);
  for (const Scalar& a : spec.numer) r.denom.push_back(spec.q / a);
  r.z = product(spec.denom) / (product(spec.numer) * spec.z);
  return r;
}

ScaledSeries shift_reflect_params(const SeriesSpec& spec) {
  require_psi_shape(spec);
  // (x;q)_{-k-1} = (-q/x)^(k+1) q^C(k+1,2) / (q/x;q)_{k+1} and
  // (y;q)_{k+1} = (1-y)(yq;q)_k.
  ScaledSeries r;
  r.spec.kind = SeriesKind::bilateral;
  r.spec.q = spec.q;
  const Scalar q2 = spec.q * spec.q;
  for (const Scalar& b : spec.denom) r.spec.numer.push_back(q2 / b);
  for (const Scalar& a : spec.numer) r.spec.denom.push_back(q2 / a);
  r.spec.z = product(spec.denom) / (product(spec.numer) * spec.z);
  Scalar num(1);
  for (const Scalar& b : spec.denom) num *= Scalar(1) - spec.q / b;
  Scalar den(1);
  for (const Scalar& a : spec.numer) den *= Scalar(1) - spec.q / a;
  r.factor = r.spec.z * num / den;
  return r;
}

}  // namespace qseries
