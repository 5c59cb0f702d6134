// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "qseries/errors.hpp"
#include "qseries/verifier.hpp"
#include "support/oracle.hpp"

using namespace qseries;
using oracle::GQ;

namespace {

ExactRational fr(long a, long b) { return ExactRational::fraction(a, b); }

ParamSet exact_params(const std::string& id, const ExactRational& q, std::vector<ExactRational> free, long n = 0) {
  const IdentityDescriptor& d = find_identity(id);
  std::map<std::string, Scalar> m;
  for (std::size_t i = 0; i < d.free_params.size(); ++i) m[d.free_params[i]] = free.at(i);
  return solve_params(d, m, q, n);
}

GQ g(const ParamSet& p, const std::string& k) { return GQ::of(p.values.at(k).exact()); }

SampleSpec small_spec(std::size_t count, std::uint64_t seed) {
  SampleSpec s;
  s.count = count;
  s.seed = seed;
  return s;
}

/// p55-b and p55-d by direct summation: q^2-shifted terminating 5psi5.
GQ p55_shifted_sum(const GQ& q, const GQ& b, const GQ& c, const GQ& d, long n, const GQ& z) {
  const GQ q2 = q * q;
  const GQ bcd = b * c * d;
  return oracle::psi_sum({b, c, d, oracle::power(q, n + 3) / bcd, oracle::power(q, -n)},
                         {q2 / b, q2 / c, q2 / d, bcd * oracle::power(q, -n - 1), oracle::power(q, n + 2)}, q, z,
                         -n - 1, n);
}

GQ p55_shifted_product(const GQ& q, const GQ& b, const GQ& c, const GQ& d, long n) {
  const GQ q2 = q * q;
  GQ r = oracle::poch(q2, q, n) * oracle::poch(q2 / (b * c), q, n) * oracle::poch(q2 / (b * d), q, n) *
         oracle::poch(q2 / (c * d), q, n);
  return r / (oracle::poch(q2 / b, q, n) * oracle::poch(q2 / c, q, n) * oracle::poch(q2 / d, q, n) *
              oracle::poch(q2 / (b * c * d), q, n));
}

}  // namespace

TEST(Catalog, HasAllIdentitiesOnce) {
  const auto& c = catalog();
  ASSERT_EQ(c.size(), 21u);
  std::set<std::string> ids;
  for (const auto& d : c) ids.insert(d.id);
  EXPECT_EQ(ids.size(), 21u);
  for (const char* id : {"four-term", "p33-a", "p33-b", "p33-c", "p33-d", "p55-a", "p55-b", "p55-c", "p55-d", "thm-a",
                         "thm-b", "corl-a", "corl-b", "corl-c", "corl-d", "corl-e", "corl-f", "corl-g", "corl-h",
                         "prop-a", "prop-b"})
    EXPECT_EQ(ids.count(id), 1u) << id;
  EXPECT_THROW(find_identity("nope"), ConfigError);
  EXPECT_EQ(find_identity("p33-a").conditions.at(0).display, "q/bcd");
}

TEST(Catalog, ConstraintClosureIsExact) {
  std::mt19937_64 rng(41);
  // id -> (power of q, power of a) in  q^k a^m = product of the others.
  const std::map<std::string, std::pair<long, long>> rel{
      {"four-term", {2, 3}}, {"thm-a", {2, 0}}, {"prop-a", {2, 0}}, {"thm-b", {5, 0}}, {"prop-b", {5, 0}},
      {"corl-b", {1, 0}},    {"corl-f", {1, 0}}, {"corl-d", {3, 0}}, {"corl-h", {3, 0}}};
  for (const auto& [id, km] : rel) {
    const IdentityDescriptor& d = find_identity(id);
    for (int i = 0; i < 20; ++i) {
      const GQ q = GQ(mpq_class(static_cast<long>(1 + rng() % 8), 9), mpq_class(static_cast<long>(rng() % 3), 7));
      std::vector<ExactRational> free;
      for (std::size_t j = 0; j < d.free_params.size(); ++j) {
        GQ x;
        do x = oracle::random_gq(rng);
        while (x.zero());
        free.push_back(x.to_exact());
      }
      const ParamSet p = exact_params(id, q.to_exact(), free);
      GQ prod(1);
      for (const auto& [k, v] : p.values)
        if (k != "q" && k != "a") prod = prod * GQ::of(v.exact());
      GQ lhs = oracle::power(q, km.first);
      if (km.second) lhs = lhs * oracle::power(g(p, "a"), km.second);
      EXPECT_EQ(lhs, prod) << id << " " << p.to_string();
    }
  }
}

TEST(Catalog, ZeroParameterIsADomainError) {
  EXPECT_THROW(exact_params("p33-a", fr(1, 2), {ExactRational(0), ExactRational(2), ExactRational(3)}), DomainError);
}

TEST(ExactIdentities, FiveFiveAtNZeroIsOneEqualsOne) {
  const ParamSet p = exact_params("p55-a", fr(1, 2), {ExactRational(2), ExactRational(3), ExactRational(7)}, 0);
  const SideValues v = eval_sides(find_identity("p55-a"), p, EvalOptions{});
  ASSERT_TRUE(v.exact());
  EXPECT_EQ(v.lhs.exact(), ExactRational(1));
  EXPECT_EQ(v.rhs.exact(), ExactRational(1));
}

TEST(ExactIdentities, FiveFiveAAtNTwo) {
  const GQ q(mpq_class(1, 2)), b(mpq_class(5, 2)), c(3), d(7);
  const long n = 2;
  const ParamSet p = exact_params("p55-a", q.to_exact(), {b.to_exact(), c.to_exact(), d.to_exact()}, n);
  EXPECT_TRUE(verify_exact(find_identity("p55-a"), p).is_zero());
  const GQ bcd = b * c * d;
  const GQ direct = oracle::psi_sum({b, c, d, oracle::power(q, n + 1) / bcd, oracle::power(q, -n)},
                                    {q / b, q / c, q / d, bcd * oracle::power(q, -n), oracle::power(q, n + 1)}, q, q,
                                    -n, n);
  const SideValues v = eval_sides(find_identity("p55-a"), p, EvalOptions{});
  EXPECT_EQ(GQ::of(v.lhs.exact()), direct);
}

TEST(ExactIdentities, FiveFiveBAtNThree) {
  const GQ q(mpq_class(1, 2)), b(mpq_class(5, 2)), c(3), d(5);
  const ParamSet p = exact_params("p55-b", q.to_exact(), {b.to_exact(), c.to_exact(), d.to_exact()}, 3);
  EXPECT_TRUE(verify_exact(find_identity("p55-b"), p).is_zero());
  const GQ direct = p55_shifted_sum(q, b, c, d, 3, q);
  EXPECT_EQ(direct, (GQ(1) - q) * p55_shifted_product(q, b, c, d, 3));
  const SideValues v = eval_sides(find_identity("p55-b"), p, EvalOptions{});
  EXPECT_EQ(GQ::of(v.lhs.exact()), direct);
}

TEST(ExactIdentities, FiveFiveDAtNTwo) {
  const GQ q(mpq_class(2, 3)), b(3), c(5), d(7);
  const ParamSet p = exact_params("p55-d", q.to_exact(), {b.to_exact(), c.to_exact(), d.to_exact()}, 2);
  EXPECT_TRUE(verify_exact(find_identity("p55-d"), p).is_zero());
  const GQ direct = p55_shifted_sum(q, b, c, d, 2, q * q * q);
  EXPECT_EQ(direct, (q - GQ(1)) / q * p55_shifted_product(q, b, c, d, 2));
}

TEST(ExactIdentities, NonFiniteIdentityIsNotExact) {
  const ParamSet p = exact_params("p33-a", fr(1, 2), {ExactRational(2), ExactRational(3), ExactRational(7)});
  EXPECT_THROW(verify_exact(find_identity("p33-a"), p), DomainError);
}

TEST(Certify, EveryIdentityPassesAtRandomSamples) {
  CertifyOptions co;
  for (const IdentityDescriptor& d : catalog()) {
    const auto params = sample(d, small_spec(2, 5));
    for (const ParamSet& p : params) {
      const Certification c = certify(d, p, co);
      EXPECT_EQ(c.status, Status::pass) << d.id << " " << p.to_string() << " " << c.diagnostic;
    }
  }
}

TEST(Certify, ExactNonzeroResidualFails) {
  const IdentityDescriptor& d = find_identity("p55-a");
  const auto bad = corrupted(d, 0);
  ASSERT_TRUE(bad.has_value());
  const ParamSet p = exact_params("p55-a", fr(1, 2), {ExactRational(2), ExactRational(3), ExactRational(7)}, 2);
  const Certification c = certify(*bad, p, CertifyOptions{});
  EXPECT_EQ(c.status, Status::fail);
  ASSERT_TRUE(c.values.has_value());
  EXPECT_TRUE(c.values->exact());
}

TEST(Certify, DecideFollowsRadii) {
  SideValues v;
  v.scale_lo = Mag::from_double(1.0);
  v.scale_up = Mag::from_double(1.0);
  Ball r(ExactRational::parse("1e-30"), Precision{128});
  v.residual = Scalar(r);
  EXPECT_EQ(decide(v, 1e-20), Status::pass);
  r.add_error(Mag::from_double(1e-15));
  v.residual = Scalar(r);
  EXPECT_FALSE(decide(v, 1e-20).has_value());
  v.residual = Scalar(Ball(ExactRational::parse("1e-10"), Precision{128}));
  EXPECT_EQ(decide(v, 1e-20), Status::fail);
}

TEST(Symmetry, PermutingABlockLeavesBothSidesUnchanged) {
  std::mt19937_64 rng(43);
  const EvalOptions eo{Precision{128}, {}, 100000};
  for (const IdentityDescriptor& d : catalog()) {
    const ParamSet base = sample(d, small_spec(1, 9)).at(0);
    const SideValues v0 = eval_sides(d, base, eo);
    for (const auto& block : d.symmetric) {
      ParamSet p = base;
      std::vector<std::string> names = block;
      std::shuffle(names.begin(), names.end(), rng);
      for (std::size_t i = 0; i < block.size(); ++i) p.values[block[i]] = base.values.at(names[i]);
      const SideValues v1 = eval_sides(d, p, eo);
      const Scalar dl = v1.lhs - v0.lhs;
      const Scalar dr = v1.rhs - v0.rhs;
      const Mag tol = mul_up(v0.scale_up, Mag::pow2(-90));
      EXPECT_LT(dl.abs_upper(), tol) << d.id;
      EXPECT_LT(dr.abs_upper(), tol) << d.id;
    }
  }
}

TEST(Admissibility, RejectsDivergentAndNearSingularSamples) {
  const ParamSet far = exact_params("p33-a", fr(1, 2), {fr(1, 5), fr(1, 3), fr(1, 2)});
  const Admissibility a = admissible(find_identity("p33-a"), far);
  EXPECT_FALSE(a.ok);
  EXPECT_NE(a.diagnostic.find("q/bcd"), std::string::npos);
  // b = q: the bracket denominator q/b equals 1.
  const ParamSet pole = exact_params("p33-a", fr(1, 2), {fr(1, 2), ExactRational(3), ExactRational(5)});
  EXPECT_FALSE(admissible(find_identity("p33-a"), pole).ok);
  const ParamSet good = exact_params("p33-a", fr(1, 2), {ExactRational(3), ExactRational(5), fr(7, 3)});
  EXPECT_TRUE(admissible(find_identity("p33-a"), good).ok);
}

TEST(Limit, ResidualShrinksWithEps) {
  const EvalOptions eo{Precision{128}, {}, 100000};
  for (const char* th : {"thm-a", "thm-b"}) {
    const ParamSet p = sample(find_identity(th), small_spec(1, 3)).at(0);
    double last = 1e300;
    for (const char* e : {"1e-1", "1e-2", "1e-3"}) {
      const LimitResult r = limit_consistency(th, p, ExactRational::parse(e), eo);
      EXPECT_LT(r.value, last) << th;
      EXPECT_LE(r.lower.to_double(), r.value * (1 + 1e-12));
      EXPECT_GE(r.upper.to_double(), r.value * (1 - 1e-12));
      last = r.value;
    }
    EXPECT_THROW(limit_consistency(th, p, ExactRational(0), eo), DomainError);
  }
  EXPECT_THROW(limit_consistency("p33-a", ParamSet{}, fr(1, 10), eo), ConfigError);
}

TEST(Fold, SeriesFoldsOntoBilateral) {
  const EvalOptions eo{Precision{128}, {}, 100000};
  for (const char* th : {"thm-a", "thm-b"}) {
    for (const ParamSet& p : sample(find_identity(th), small_spec(3, 4))) {
      const FoldResult f = fold_check(th, p, eo);
      EXPECT_LT(f.residual.abs_upper(), mul_up(f.bilateral.abs_upper(), Mag::from_double(1e-25))) << th;
    }
  }
}

TEST(Fold, PartialSumsAgreeExactly) {
  std::mt19937_64 rng(47);
  for (const char* th : {"thm-a", "thm-b"}) {
    const bool a = std::string(th) == "thm-a";
    int checked = 0;
    for (int i = 0; i < 50 && checked < 5; ++i) {
      const GQ q(mpq_class(1, static_cast<long>(2 + rng() % 5)));
      std::vector<ExactRational> free;
      for (int j = 0; j < 6; ++j) free.push_back(oracle::random_gq(rng).to_exact());
      ParamSet p;
      try {
        p = exact_params(th, q.to_exact(), free);
      } catch (const DomainError&) {
        continue;
      }
      std::vector<GQ> num, den;
      for (const char* s : {"b", "c", "d", "e", "f", "g", "h"}) {
        num.push_back(g(p, s));
        den.push_back((a ? q : q * q) / g(p, s));
      }
      for (long K = 0; K <= 4; ++K) {
        GQ folded, bil;
        try {
          for (long k = 0; k <= K; ++k) {
            const GQ t = oracle::psi_term(num, den, q, GQ(1), k) * oracle::power(q, k);
            if (a)
              folded = folded + (k == 0 ? GQ(1) : (GQ(1) + oracle::power(q, k)) * t);
            else
              folded = folded + (GQ(1) - oracle::power(q, 1 + 2 * k)) * t;
          }
          bil = oracle::psi_sum(num, den, q, q, a ? -K : -K - 1, K);
        } catch (const std::domain_error&) {
          break;
        }
        const auto [lf, lb] = fold_partial_sums(th, p, K);
        EXPECT_EQ(GQ::of(lf), folded) << th << " K=" << K;
        EXPECT_EQ(GQ::of(lb), bil) << th << " K=" << K;
        EXPECT_EQ(lf, lb) << th << " K=" << K;
        if (K == 4) ++checked;
      }
    }
    EXPECT_GE(checked, 3) << th;
  }
}

TEST(Reduction, CorollariesCollapseOntoSummations) {
  const CertifyOptions co;
  std::mt19937_64 rng(53);
  for (const Reduction& r : reductions()) {
    const IdentityDescriptor& target = find_identity(r.target);
    SampleSpec spec = small_spec(1, 17);
    spec.n_values = {3};
    int done = 0;
    for (std::uint64_t seed = 1; seed < 60 && done < 1; ++seed) {
      spec.seed = seed;
      const ParamSet tp = sample(target, spec).at(0);
      const Scalar t(ExactRational(mpq_class(static_cast<long>(rng() % 40) + 10, 17), mpq_class(1, 3)));
      const ParamSet cp = specialize(r, tp, t);
      if (!admissible(find_identity(r.corollary), cp).ok) continue;
      const Certification c = certify_with([&](const EvalOptions& eo) { return reduction_sides(r, tp, t, eo); }, co);
      EXPECT_EQ(c.status, Status::pass) << r.corollary << " -> " << r.target << " " << c.diagnostic;
      ++done;
    }
    EXPECT_EQ(done, 1) << r.corollary;
  }
}

TEST(Reduction, FiveFiveSpecializationSolvesToNegativePower) {
  const ParamSet tp = exact_params("p55-a", fr(1, 2), {ExactRational(2), ExactRational(3), ExactRational(7)}, 4);
  const ParamSet cp = specialize(Reduction{"corl-b", "p55-a"}, tp, Scalar(1));
  EXPECT_EQ(cp.values.at("f").exact(), ExactRational(16));
  const ParamSet tp2 = exact_params("p55-b", fr(1, 2), {ExactRational(2), ExactRational(3), ExactRational(7)}, 2);
  const ParamSet cp2 = specialize(Reduction{"corl-d", "p55-b"}, tp2, Scalar(1));
  EXPECT_EQ(cp2.values.at("f").exact(), ExactRational(4));
}

TEST(Corrupted, ControlFailsForEveryIdentity) {
  const CertifyOptions co;
  for (const IdentityDescriptor& d : catalog()) {
    const ParamSet p = sample(d, small_spec(1, 21)).at(0);
    bool failed = false;
    for (std::size_t slot = 0; !failed; ++slot) {
      const auto bad = corrupted(d, slot);
      if (!bad) break;
      failed = certify(*bad, p, co).status == Status::fail;
    }
    EXPECT_TRUE(failed) << d.id;
  }
}

TEST(ClosedForm, NeedsLeadingBilateralTerm) {
  const ParamSet p = sample(find_identity("four-term"), small_spec(1, 2)).at(0);
  EXPECT_THROW(psi_closed_form(find_identity("four-term"), p, EvalOptions{}), ConfigError);
}
