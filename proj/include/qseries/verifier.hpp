// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qseries/identities.hpp"

namespace qseries {

struct Interval {
  double lo = 0;
  double hi = 0;
};

struct SampleSpec {
  std::uint64_t seed = 1;
  std::size_t count = 25;
  Interval q_range{0.1, 0.8};        // |q|
  Interval param_range{0.2, 5.0};    // |free parameter|
  bool allow_complex = true;
  std::vector<long> n_values{0, 1, 2, 3, 4, 5};
  AdmissibilityOptions admissibility;
  CertifyOptions certify;

  /// Throws ConfigError when a field is out of range.
  void validate() const;
};

/// Draws `spec.count` admissible parameter sets. Free parameters are rounded
/// to multiples of 10^-6 so every set is exactly replayable. Throws
/// ExhaustionError after 100 * count attempts.
std::vector<ParamSet> sample(const IdentityDescriptor& id, const SampleSpec& spec);

/// Rational parameter sets for the finite identities: q from `qs`, the free
/// parameters small fractions p/d with |p/d| inside param_range. Sets that
/// hit a pole are redrawn.
std::vector<ParamSet> sample_exact(const IdentityDescriptor& id, const SampleSpec& spec,
                                   const std::vector<ExactRational>& qs);

/// Exact lhs - rhs of a finite identity. Throws DomainError if the
/// evaluation leaves the rationals and PoleError on degenerate data.
ExactRational verify_exact(const IdentityDescriptor& id, const ParamSet& params);

struct SampleRecord {
  std::string identity;
  std::size_t sample_index = 0;
  std::vector<std::pair<std::string, std::string>> params;  // exact strings, n last
  std::string lhs;
  std::string rhs;
  double abs_err = 0;
  double rel_err = 0;
  double radius = 0;
  long precision_bits = 0;
  long terms_used = 0;
  Status status = Status::rejected;
  std::string diagnostic;
};

struct ReportSummary {
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t inconclusive = 0;
  std::size_t rejected = 0;
  double max_rel_err = 0;
};

/// One identity (or one auxiliary check) worth of records.
struct VerificationReport {
  std::string identity;
  std::vector<SampleRecord> records;

  ReportSummary summary() const;
};

/// Samples and certifies. Per-sample errors become rejected records.
VerificationReport verify(const IdentityDescriptor& id, const SampleSpec& spec);
/// Same on given parameter sets.
VerificationReport verify(const IdentityDescriptor& id, const std::vector<ParamSet>& params,
                          const CertifyOptions& opts);
/// Exact-mode report: pass iff the residual is exactly zero.
VerificationReport verify_exact(const IdentityDescriptor& id, const std::vector<ParamSet>& params);

/// fold_check on sampled theorem parameters, certified against rel_tol.
VerificationReport verify_fold(const std::string& theorem, const std::vector<ParamSet>& params,
                               const CertifyOptions& opts);
/// limit_consistency for each eps in order. A sample passes when its
/// residuals strictly decrease along `eps` and the last is at most a tenth of
/// the first.
VerificationReport verify_limit(const std::string& theorem, const std::vector<ParamSet>& params,
                                const std::vector<ExactRational>& eps, const EvalOptions& opts);

/// Section exit status: 1 on any failure, 3 on inconclusives only, else 0.
int exit_code(const std::vector<VerificationReport>& reports);

}  // namespace qseries
