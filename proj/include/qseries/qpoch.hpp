// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>

#include "qseries/scalar.hpp"

namespace qseries {

/// Order of a q-shifted factorial: an integer or infinity.
struct Order {
  bool infinite = false;
  long n = 0;

  static Order inf() { return {true, 0}; }
  static Order finite(long n) { return {false, n}; }
  std::string to_string() const { return infinite ? "inf" : std::to_string(n); }
};

/// Singularity margin 2^(-P/2) for working precision P.
Mag singularity_margin(Precision p);

/// (x;q)_n for any integer n. Exact when x and q are exact.
///
/// Throws PoleError when n < 0 and some factor 1 - x q^j vanishes, and
/// PrecisionError when such a factor is a ball that cannot be certified to
/// stay at least the singularity margin away from zero.
Scalar qpoch(const Scalar& x, const Scalar& q, long n);

/// (x;q)_inf as a ball at precision `p`, with the truncation error below
/// `tol` (relative to the result) folded into the radius.
///
/// Throws DomainError unless |q| < 1 is certified. With `as_divisor`, each
/// factor is checked against the singularity margin as in `qpoch`.
Ball qpoch_inf(const Scalar& x, const Scalar& q, Mag tol, Precision p, bool as_divisor = false);

/// prod (a;q)_n / prod (b;q)_n. Factors that vanish in the numerator
/// position give an exact 0 instead of a pole.
Scalar qfac_ratio(std::span<const Scalar> numers, std::span<const Scalar> denoms, const Scalar& q,
                  Order n, Precision p, Mag tol);

}  // namespace qseries
