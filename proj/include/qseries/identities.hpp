// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qseries/expression.hpp"

namespace qseries {

struct Constraint {
  std::string solved;  // symbol fixed by the product relation
  Monomial formula;    // its value in terms of the others
  std::string display;
};

struct DerivedSymbol {
  std::string name;
  Monomial formula;
};

/// Convergence inequality |value| < 1, shown as `display`.
struct Condition {
  std::string display;
  Monomial value;
};

struct IdentityDescriptor {
  std::string id;
  std::string title;
  std::vector<std::string> free_params;
  std::optional<Constraint> constraint;
  std::vector<DerivedSymbol> derived;
  std::vector<Condition> conditions;
  bool has_n = false;
  Expression lhs;
  Expression rhs;  // empty for the "= 0" displays
  /// Blocks of symbols the display is symmetric in.
  std::vector<std::vector<std::string>> symmetric;

  /// Free parameters plus the solved one.
  std::vector<std::string> params() const;
  bool finite_form() const { return has_n; }
};

/// All 21 identities in a stable order.
const std::vector<IdentityDescriptor>& catalog();
/// Throws ConfigError for unknown ids.
const IdentityDescriptor& find_identity(std::string_view id);

/// Values for q, the free parameters and the solved parameter.
struct ParamSet {
  std::map<std::string, Scalar> values;
  long n = 0;

  std::string to_string() const;
};

/// Solves the constraint for the dependent symbol. Throws DomainError on a
/// zero parameter.
ParamSet solve_params(const IdentityDescriptor& id, const std::map<std::string, Scalar>& free,
                      const Scalar& q, long n = 0);

/// Bindings with the derived symbols (u, v, lam, mu, th) filled in.
Bindings bind(const IdentityDescriptor& id, const ParamSet& params, Precision p);

struct Admissibility {
  bool ok = true;
  std::string diagnostic;
};

struct AdmissibilityOptions {
  /// Stated conditions and ratio tests must stay below 1 - 2^-16.
  double convergence = 1.0 - 1.0 / 65536.0;
  /// Minimum |1 - x q^k| over scanned divisor factors.
  double singular_margin = 1.0 / 1024.0;
};

Admissibility admissible(const IdentityDescriptor& id, const ParamSet& params,
                         const AdmissibilityOptions& opts = {});

struct SideValues {
  Scalar lhs;
  Scalar rhs;
  Scalar residual;  // lhs - rhs
  Mag scale_lo;     // bounds on max(sum |lhs terms|, sum |rhs terms|)
  Mag scale_up;
  long terms_used = 0;
  Precision precision;

  bool exact() const { return residual.is_exact(); }
  double abs_err() const;
  double rel_err() const;
  double radius() const;
};

SideValues eval_sides(const IdentityDescriptor& id, const ParamSet& params, const EvalOptions& opts);
SideValues eval_sides(const IdentityDescriptor& id, const Bindings& bindings, const EvalOptions& opts);

enum class Status { pass, fail, inconclusive, rejected };
const char* to_string(Status s);

struct CertifyOptions {
  double rel_tol = 1e-20;
  std::vector<long> ladder{64, 128, 256};
  long max_terms = 100000;
};

struct Certification {
  Status status = Status::rejected;
  std::optional<SideValues> values;
  std::string diagnostic;
};

/// Evaluates on the precision ladder until the residual is certified below
/// or above rel_tol * scale. Evaluation errors become rejections.
Certification certify(const IdentityDescriptor& id, const ParamSet& params, const CertifyOptions& opts);
/// The same ladder around an arbitrary two-sided evaluation.
Certification certify_with(const std::function<SideValues(const EvalOptions&)>& eval, const CertifyOptions& opts);
/// Status for an already evaluated sample, or nullopt if undecided.
std::optional<Status> decide(const SideValues& v, double rel_tol);

/// |f L1 - Lt| + |f R1 - Rt| where L1, R1 are the four-term sides at
/// a = 1 + eps (thm-a) or a = q(1 + eps) (thm-b), Lt, Rt the theorem's
/// sides, and f = 1 or 1 - q. Throws DomainError for eps = 0.
struct LimitResult {
  double value = 0;  // approximate residual
  Mag lower;
  Mag upper;
};
LimitResult limit_consistency(const std::string& theorem, const ParamSet& params, const ExactRational& eps,
                              const EvalOptions& opts);

/// The folded first term of a theorem's proof (a pair of phi series) minus
/// the theorem's bilateral series.
struct FoldResult {
  Scalar folded;
  Scalar bilateral;
  Scalar residual;
};
FoldResult fold_check(const std::string& theorem, const ParamSet& params, const EvalOptions& opts);

/// Exact partial sums for the fold: the folded series up to k = K against
/// the bilateral terms over [-K, K] (thm-a) or [-K-1, K] (thm-b).
std::pair<ExactRational, ExactRational> fold_partial_sums(const std::string& theorem,
                                                          const ParamSet& params, long K);

/// A corollary that collapses onto a summation identity under a
/// specialization of its parameters.
struct Reduction {
  std::string corollary;
  std::string target;
};
const std::vector<Reduction>& reductions();

/// Corollary parameters reproducing `target` at `target_params`. For the
/// 3psi3 targets `t` fills the cancelling pair (c, d) = (t, q/t) or
/// (t, q^2/t); for the 5psi5 targets it is ignored and e is chosen so that
/// the solved f equals q^-n.
ParamSet specialize(const Reduction& r, const ParamSet& target_params, const Scalar& t);

/// The bilateral term of `id` (its first lhs term) written as the rhs minus
/// the remaining lhs terms.
Scalar psi_closed_form(const IdentityDescriptor& id, const ParamSet& params, const EvalOptions& opts);

/// lhs: the corollary's closed form at the specialization, rhs: the target's.
SideValues reduction_sides(const Reduction& r, const ParamSet& target_params, const Scalar& t,
                           const EvalOptions& opts);

/// Copy of `id` with one bracket parameter scaled by 1001/1000. `slot`
/// enumerates candidate parameters (RHS brackets first); nullopt when out
/// of range.
std::optional<IdentityDescriptor> corrupted(const IdentityDescriptor& id, std::size_t slot);

}  // namespace qseries
