// SPDX-License-Identifier: Apache-2.0
#include "qseries/verifier.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "qseries/errors.hpp"

namespace qseries {

namespace {

constexpr long kGrid = 1000000;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

std::mt19937_64 stream(std::uint64_t seed, const std::string& id, std::uint64_t salt) {
  return std::mt19937_64(splitmix(splitmix(seed ^ fnv1a(id)) + salt));
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Random point with modulus in `r`, rounded to the 10^-6 grid.
ExactRational draw_point(std::mt19937_64& rng, Interval r, bool complex) {
  const double m = uniform(rng, r.lo, r.hi);
  const double t = complex ? uniform(rng, 0.0, 2 * std::numbers::pi) : (rng() & 1 ? std::numbers::pi : 0.0);
  const long re = std::lround(m * std::cos(t) * kGrid);
  const long im = std::lround(m * std::sin(t) * kGrid);
  return ExactRational(mpq_class(re, kGrid), mpq_class(im, kGrid));
}

ExactRational draw_fraction(std::mt19937_64& rng, Interval r) {
  for (;;) {
    const long p = std::uniform_int_distribution<long>(1, 60)(rng);
    const long d = std::uniform_int_distribution<long>(1, 12)(rng);
    const double v = static_cast<double>(p) / static_cast<double>(d);
    if (v < r.lo || v > r.hi) continue;
    return ExactRational::fraction(rng() & 1 ? -p : p, d);
  }
}

long draw_n(std::mt19937_64& rng, const IdentityDescriptor& id, const std::vector<long>& ns) {
  if (!id.has_n) return 0;
  return ns[std::uniform_int_distribution<std::size_t>(0, ns.size() - 1)(rng)];
}

std::string describe(const QSeriesError& e) { return std::string(e.kind()) + ": " + e.what(); }

std::string value_string(const Scalar& x) {
  return x.is_exact() ? x.exact().to_string() : x.ball().mid_string(30);
}

std::vector<std::pair<std::string, std::string>> param_strings(const IdentityDescriptor* id, const ParamSet& p) {
  std::vector<std::pair<std::string, std::string>> r;
  for (const auto& [k, v] : p.values) r.emplace_back(k, v.to_string());
  if (!id || id->has_n) r.emplace_back("n", std::to_string(p.n));
  return r;
}

SampleRecord record_of(const std::string& name, std::size_t index, const Certification& c) {
  SampleRecord r;
  r.identity = name;
  r.sample_index = index;
  r.status = c.status;
  r.diagnostic = c.diagnostic;
  if (c.values) {
    const SideValues& v = *c.values;
    r.lhs = value_string(v.lhs);
    r.rhs = value_string(v.rhs);
    r.abs_err = v.abs_err();
    r.rel_err = v.rel_err();
    r.radius = v.radius();
    r.precision_bits = v.exact() ? 0 : v.precision.bits;
    r.terms_used = v.terms_used;
  }
  return r;
}

}  // namespace

void SampleSpec::validate() const {
  if (count < 1) throw ConfigError("sample count must be at least 1");
  if (!(q_range.lo > 0 && q_range.lo <= q_range.hi && q_range.hi < 1))
    throw ConfigError("q range must lie inside (0, 1)");
  if (!(param_range.lo > 0 && param_range.lo <= param_range.hi))
    throw ConfigError("parameter range must be positive and ordered");
  if (n_values.empty()) throw ConfigError("no values for n");
  if (certify.ladder.empty()) throw ConfigError("empty precision ladder");
  if (!(certify.rel_tol > 0)) throw ConfigError("tolerance must be positive");
}

std::vector<ParamSet> sample(const IdentityDescriptor& id, const SampleSpec& spec) {
  spec.validate();
  std::mt19937_64 rng = stream(spec.seed, id.id, 0);
  std::vector<ParamSet> out;
  std::map<std::string, std::size_t> reasons;
  const std::size_t budget = 100 * spec.count;
  for (std::size_t attempt = 0; attempt < budget && out.size() < spec.count; ++attempt) {
    const Scalar q = draw_point(rng, spec.q_range, spec.allow_complex);
    std::map<std::string, Scalar> free;
    for (const std::string& s : id.free_params) free[s] = draw_point(rng, spec.param_range, spec.allow_complex);
    const long n = draw_n(rng, id, spec.n_values);
    try {
      ParamSet p = solve_params(id, free, q, n);
      const Admissibility a = admissible(id, p, spec.admissibility);
      if (a.ok)
        out.push_back(std::move(p));
      else
        ++reasons[a.diagnostic];
    } catch (const QSeriesError& e) {
      ++reasons[describe(e)];
    }
  }
  if (out.size() < spec.count) {
    std::string dominant = "none";
    std::size_t most = 0;
    for (const auto& [why, k] : reasons)
      if (k > most) std::tie(dominant, most) = std::tie(why, k);
    throw ExhaustionError(id.id + ": found " + std::to_string(out.size()) + " of " + std::to_string(spec.count) +
                          " admissible samples in " + std::to_string(budget) + " attempts; most common rejection (" +
                          std::to_string(most) + "x): " + dominant);
  }
  return out;
}

std::vector<ParamSet> sample_exact(const IdentityDescriptor& id, const SampleSpec& spec,
                                   const std::vector<ExactRational>& qs) {
  if (!id.finite_form()) throw ConfigError(id.id + " has no finite form; exact mode needs p55-*");
  if (qs.empty()) throw ConfigError("no values for q");
  spec.validate();
  std::mt19937_64 rng = stream(spec.seed, id.id, 1);
  std::vector<ParamSet> out;
  std::string last;
  const std::size_t budget = 100 * spec.count;
  for (std::size_t attempt = 0; attempt < budget && out.size() < spec.count; ++attempt) {
    const ExactRational& q = qs[std::uniform_int_distribution<std::size_t>(0, qs.size() - 1)(rng)];
    std::map<std::string, Scalar> free;
    for (const std::string& s : id.free_params) {
      ExactRational v = draw_fraction(rng, spec.param_range);
      if (spec.allow_complex && (rng() & 1)) v += ExactRational(0, draw_fraction(rng, spec.param_range).re());
      free[s] = v;
    }
    const long n = draw_n(rng, id, spec.n_values);
    try {
      ParamSet p = solve_params(id, free, q, n);
      verify_exact(id, p);
      out.push_back(std::move(p));
    } catch (const PoleError& e) {
      last = describe(e);
    } catch (const DomainError& e) {
      last = describe(e);
    }
  }
  if (out.size() < spec.count)
    throw ExhaustionError(id.id + ": exact sampling exhausted after " + std::to_string(budget) + " attempts: " + last);
  return out;
}

ExactRational verify_exact(const IdentityDescriptor& id, const ParamSet& params) {
  EvalOptions eo;
  const SideValues v = eval_sides(id, params, eo);
  if (!v.exact()) throw DomainError(id.id + ": evaluation left the rationals");
  return v.residual.exact();
}

ReportSummary VerificationReport::summary() const {
  ReportSummary s;
  for (const SampleRecord& r : records) {
    switch (r.status) {
      case Status::pass:
        ++s.pass;
        break;
      case Status::fail:
        ++s.fail;
        break;
      case Status::inconclusive:
        ++s.inconclusive;
        break;
      case Status::rejected:
        ++s.rejected;
        break;
    }
    if (r.status != Status::rejected) s.max_rel_err = std::max(s.max_rel_err, r.rel_err);
  }
  return s;
}

VerificationReport verify(const IdentityDescriptor& id, const SampleSpec& spec) {
  return verify(id, sample(id, spec), spec.certify);
}

VerificationReport verify(const IdentityDescriptor& id, const std::vector<ParamSet>& params,
                          const CertifyOptions& opts) {
  VerificationReport rep{id.id, {}};
  for (std::size_t i = 0; i < params.size(); ++i) {
    SampleRecord r = record_of(id.id, i, certify(id, params[i], opts));
    r.params = param_strings(&id, params[i]);
    rep.records.push_back(std::move(r));
  }
  return rep;
}

VerificationReport verify_exact(const IdentityDescriptor& id, const std::vector<ParamSet>& params) {
  VerificationReport rep{id.id, {}};
  for (std::size_t i = 0; i < params.size(); ++i) {
    Certification c;
    try {
      EvalOptions eo;
      const SideValues v = eval_sides(id, params[i], eo);
      if (!v.exact()) throw DomainError("evaluation left the rationals");
      c.status = v.residual.exact().is_zero() ? Status::pass : Status::fail;
      if (c.status == Status::fail) c.diagnostic = "exact residual " + v.residual.exact().to_string();
      c.values = v;
    } catch (const QSeriesError& e) {
      c.status = Status::rejected;
      c.diagnostic = describe(e);
    }
    SampleRecord r = record_of(id.id, i, c);
    r.params = param_strings(&id, params[i]);
    rep.records.push_back(std::move(r));
  }
  return rep;
}

VerificationReport verify_fold(const std::string& theorem, const std::vector<ParamSet>& params,
                               const CertifyOptions& opts) {
  VerificationReport rep{theorem + ":fold", {}};
  for (std::size_t i = 0; i < params.size(); ++i) {
    const Certification c = certify_with(
        [&](const EvalOptions& eo) {
          const FoldResult f = fold_check(theorem, params[i], eo);
          SideValues v;
          v.lhs = f.folded;
          v.rhs = f.bilateral;
          v.residual = f.residual;
          v.scale_lo = max(f.folded.abs_lower(), f.bilateral.abs_lower());
          v.scale_up = max(f.folded.abs_upper(), f.bilateral.abs_upper());
          v.precision = eo.precision;
          return v;
        },
        opts);
    SampleRecord r = record_of(rep.identity, i, c);
    r.params = param_strings(nullptr, params[i]);
    r.params.pop_back();
    rep.records.push_back(std::move(r));
  }
  return rep;
}

VerificationReport verify_limit(const std::string& theorem, const std::vector<ParamSet>& params,
                                const std::vector<ExactRational>& eps, const EvalOptions& opts) {
  VerificationReport rep{theorem + ":limit", {}};
  std::size_t index = 0;
  for (const ParamSet& p : params) {
    std::vector<SampleRecord> rows;
    std::vector<double> values;
    std::string error;
    for (const ExactRational& e : eps) {
      SampleRecord r;
      r.identity = rep.identity;
      r.sample_index = index;
      r.params = param_strings(nullptr, p);
      r.params.back() = {"eps", e.to_string()};
      r.precision_bits = opts.precision.bits;
      try {
        const LimitResult l = limit_consistency(theorem, p, e, opts);
        r.abs_err = l.value;
        r.rel_err = l.value;
        r.radius = (l.upper.to_double() - l.lower.to_double()) / 2;
        values.push_back(l.value);
      } catch (const QSeriesError& err) {
        error = describe(err);
      }
      rows.push_back(std::move(r));
    }
    Status s = Status::rejected;
    std::string diag = error;
    if (error.empty()) {
      bool decreasing = true;
      for (std::size_t k = 1; k < values.size(); ++k) decreasing = decreasing && values[k] < values[k - 1];
      const auto size = [](const ExactRational& x) { return std::hypot(x.re().get_d(), x.im().get_d()); };
      const double want = std::sqrt(size(eps.back()) / size(eps.front()));
      const bool shrinks = values.size() < 2 || values.back() <= want * values.front();
      s = decreasing && shrinks ? Status::pass : Status::fail;
      if (!decreasing)
        diag = "residual does not decrease with eps";
      else if (!shrinks)
        diag = "residual shrinks more slowly than sqrt(eps)";
    }
    for (SampleRecord& r : rows) {
      r.status = s;
      r.diagnostic = diag;
      rep.records.push_back(std::move(r));
    }
    ++index;
  }
  return rep;
}

int exit_code(const std::vector<VerificationReport>& reports) {
  bool inconclusive = false;
  for (const VerificationReport& r : reports) {
    const ReportSummary s = r.summary();
    if (s.fail) return 1;
    inconclusive = inconclusive || s.inconclusive;
  }
  return inconclusive ? 3 : 0;
}

}  // namespace qseries
