// SPDX-License-Identifier: Apache-2.0
#include "qseries/qpoch.hpp"

#include "qseries/errors.hpp"

namespace qseries {

namespace {

constexpr long kMaxInfiniteFactors = 1000000;

Scalar one_minus(const Scalar& t) { return Scalar(1) - t; }

void check_divisor_factor(const Scalar& f, const Scalar& x, long j) {
  if (f.is_exact()) {
    if (f.exact().is_zero())
      throw PoleError("factor 1 - x q^" + std::to_string(j) + " vanishes for x = " + x.to_string(8));
    return;
  }
  const Mag delta = singularity_margin(f.ball().precision());
  if (f.ball().abs_lower() < delta)
    throw PrecisionError("factor 1 - x q^" + std::to_string(j) +
                         " is within the singularity margin for x = " + x.to_string(8));
}

/// prod_{j=j0}^{j1-1} (1 - x q^j). A zero factor short-circuits to exact 0
/// unless `divisor` is set, in which case it is an error.
Scalar factor_product(const Scalar& x, const Scalar& q, long j0, long j1, bool divisor) {
  Scalar prod(1);
  if (j1 <= j0) return prod;
  Scalar t = j0 == 0 ? x : x * pow(q, j0);
  for (long j = j0; j < j1; ++j) {
    const Scalar f = one_minus(t);
    if (divisor)
      check_divisor_factor(f, x, j);
    else if (f.is_exact_zero())
      return Scalar(0);
    prod *= f;
    if (j + 1 < j1) t *= q;
  }
  return prod;
}

}  // namespace

Mag singularity_margin(Precision p) { return Mag::pow2(-(p.bits / 2)); }

Scalar qpoch(const Scalar& x, const Scalar& q, long n) {
  if (n >= 0) return factor_product(x, q, 0, n, false);
  return Scalar(1) / factor_product(x, q, n, 0, true);
}

Ball qpoch_inf(const Scalar& x, const Scalar& q, Mag tol, Precision p, bool as_divisor) {
  const Mag q_up = q.abs_upper();
  const Mag unit = Mag::from_double(1.0);
  if (q_up >= unit) throw DomainError("(x;q)_inf needs |q| < 1, got q = " + q.to_string(8));
  if (x.is_exact_zero()) return one(p);

  const Mag x_up = x.abs_upper();
  const Mag gap = sub_down(unit, q_up);
  const Mag half = Mag::pow2(-1);
  const Ball qb = q.to_ball(p);
  Ball t = x.to_ball(p);
  Ball prod = one(p);
  Mag qk = unit;  // upper bound on |q|^k
  for (long k = 0;; ++k) {
    if (k >= 16) {
      const Mag s = div_up(x_up * qk, gap);
      const Mag tail = s * Mag::pow2(1);
      if (s <= half && tail < tol) {
        prod.add_error(prod.abs_upper() * tail);
        return prod;
      }
    }
    if (k >= kMaxInfiniteFactors)
      throw BudgetError("(x;q)_inf did not reach tolerance within " +
                        std::to_string(kMaxInfiniteFactors) + " factors");
    const Ball f = one(p) - t;
    if (as_divisor) {
      if (f.contains_zero() && x.is_exact() && q.is_exact() &&
          (x.exact() * pow(q.exact(), k)) == ExactRational(1))
        throw PoleError("(x;q)_inf has a vanishing factor at k = " + std::to_string(k) +
                        " for x = " + x.to_string(8));
      check_divisor_factor(Scalar(f), x, k);
    }
    prod *= f;
    t *= qb;
    qk = qk * q_up;
  }
}

Scalar qfac_ratio(std::span<const Scalar> numers, std::span<const Scalar> denoms, const Scalar& q,
                  Order n, Precision p, Mag tol) {
  if (n.infinite) {
    Ball num = one(p);
    for (const Scalar& a : numers) num *= qpoch_inf(a, q, tol, p);
    Ball den = one(p);
    for (const Scalar& b : denoms) den *= qpoch_inf(b, q, tol, p, true);
    return num / den;
  }
  // For n < 0, (a;q)_n = 1 / prod_{j=n}^{-1}(1 - a q^j): the roles swap.
  const bool negative = n.n < 0;
  const long j0 = negative ? n.n : 0;
  const long j1 = negative ? 0 : n.n;
  const auto& top = negative ? denoms : numers;
  const auto& bottom = negative ? numers : denoms;
  Scalar num(1);
  for (const Scalar& a : top) {
    num *= factor_product(a, q, j0, j1, false);
    if (num.is_exact_zero()) return num;
  }
  Scalar den(1);
  for (const Scalar& b : bottom) {
    try {
      den *= factor_product(b, q, j0, j1, true);
    } catch (QSeriesError& e) {
      e.add_context("q-factorial of " + b.to_string(8) + " at order " + n.to_string());
      throw;
    }
  }
  return num / den;
}

}  // namespace qseries
