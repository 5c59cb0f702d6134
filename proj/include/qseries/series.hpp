// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qseries/qpoch.hpp"

namespace qseries {

enum class SeriesKind { unilateral, bilateral };

/// Parameters of a unilateral r+1 phi s or a bilateral r psi s series.
struct SeriesSpec {
  SeriesKind kind = SeriesKind::unilateral;
  std::vector<Scalar> numer;
  std::vector<Scalar> denom;
  Scalar q;
  Scalar z;

  bool all_exact() const;
  std::string to_string(int digits = 12) const;
};

/// Summation window implied by vanishing q-factorials. Unbounded ends are
/// represented by nullopt.
struct TermRange {
  std::optional<long> kmin;
  std::optional<long> kmax;
  bool finite() const { return kmin.has_value() && kmax.has_value(); }
};

struct EvalOptions {
  Precision precision{128};
  /// Truncation target relative to max(|partial sum|, max |term|).
  /// Zero selects 2^(16 - P).
  Mag tol;
  long max_terms = 100000;

  Mag effective_tol() const { return tol.is_zero() ? Mag::pow2(16 - precision.bits) : tol; }
};

struct SeriesValue {
  Scalar value;
  long terms_used = 0;
};

/// Upper bounds on the limiting ratio-test values of an r psi r series.
struct BilateralRatios {
  Mag forward;
  Mag backward;
};

/// Sum of a unilateral series. Exact when every input is exact and the
/// series terminates.
SeriesValue phi_eval(const SeriesSpec& spec, const EvalOptions& opts = {});

/// Sum of a bilateral series with as many numerator as denominator
/// parameters. Exact when every input is exact and the range is finite.
SeriesValue psi_eval(const SeriesSpec& spec, const EvalOptions& opts = {});

/// For unilateral specs only kmax is meaningful (kmin is 0).
TermRange term_range(const SeriesSpec& spec, Precision p = {});
BilateralRatios bilateral_ratios(const SeriesSpec& spec);

/// k -> -k. The value is unchanged.
SeriesSpec reflect_params(const SeriesSpec& spec);

/// A series multiplied by a constant.
struct ScaledSeries {
  Scalar factor;
  SeriesSpec spec;
};

/// k -> -k-1. psi(spec) = factor * psi(result.spec).
ScaledSeries shift_reflect_params(const SeriesSpec& spec);

/// Ratio threshold 1 - 2^-16 for nonterminating sides.
Mag convergence_threshold();

}  // namespace qseries
