// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "qseries/errors.hpp"
#include "qseries/series.hpp"
#include "support/oracle.hpp"

using namespace qseries;
using oracle::GQ;

namespace {

ExactRational fr(long a, long b) { return ExactRational::fraction(a, b); }

std::vector<Scalar> scalars(const std::vector<GQ>& xs) {
  std::vector<Scalar> r;
  for (const GQ& x : xs) r.emplace_back(x.to_exact());
  return r;
}

SeriesSpec make(SeriesKind k, const std::vector<GQ>& a, const std::vector<GQ>& b, const GQ& q, const GQ& z) {
  return {k, scalars(a), scalars(b), Scalar(q.to_exact()), Scalar(z.to_exact())};
}

/// |ball midpoint - x| <= radius + slack, in exact arithmetic.
bool near(const Scalar& v, const GQ& x, const mpq_class& slack) {
  const ExactRational mid = v.is_exact() ? v.exact() : v.ball().mid_exact();
  const mpq_class dr = mid.re() - x.re;
  const mpq_class di = mid.im() - x.im;
  const mpq_class bound = v.radius().to_mpq() + slack;
  return dr * dr + di * di <= bound * bound;
}

mpq_class tiny() {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, 60);
  return mpq_class(1, p);
}

SeriesSpec p55a(const GQ& q, const GQ& b, const GQ& c, const GQ& d, long n) {
  const GQ bcd = b * c * d;
  return make(SeriesKind::bilateral, {b, c, d, oracle::power(q, n + 1) / bcd, oracle::power(q, -n)},
              {q / b, q / c, q / d, bcd * oracle::power(q, -n), oracle::power(q, n + 1)}, q, q);
}

}  // namespace

TEST(Phi, TerminatingOnePhiZero) {
  const GQ q(mpq_class(1, 2));
  const GQ a = oracle::power(q, -2);
  const SeriesSpec s = make(SeriesKind::unilateral, {a}, {}, q, q);
  const SeriesValue v = phi_eval(s);
  ASSERT_TRUE(v.value.is_exact());
  EXPECT_EQ(GQ::of(v.value.exact()), oracle::phi_sum({a}, {}, q, q, 2));
  EXPECT_EQ(term_range(s).kmax, 2);
}

TEST(Phi, NonterminatingMatchesLongPartialSum) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) {
    const GQ q(mpq_class(static_cast<long>(1 + rng() % 5), 9), mpq_class(static_cast<long>(rng() % 3), 11));
    const GQ a = oracle::random_gq(rng), b = oracle::random_gq(rng), c = oracle::random_gq(rng);
    const GQ z(mpq_class(1, 3), mpq_class(-1, 5));
    if (a.zero() || b.zero() || c.zero()) continue;
    const SeriesSpec s = make(SeriesKind::unilateral, {a, b}, {c}, q, z);
    SeriesValue v;
    try {
      v = phi_eval(s, EvalOptions{Precision{160}, {}, 100000});
    } catch (const QSeriesError&) {
      continue;
    }
    const GQ ref = oracle::phi_sum_long({a, b}, {c}, q, z, 200);
    EXPECT_TRUE(near(v.value, ref, tiny())) << i;
  }
}

TEST(Phi, DivergentArgumentIsRefused) {
  const GQ q(mpq_class(1, 2));
  const SeriesSpec s = make(SeriesKind::unilateral, {GQ(mpq_class(1, 3)), GQ(mpq_class(1, 5))}, {GQ(mpq_class(1, 7))},
                            q, GQ(mpq_class(3, 2)));
  EXPECT_THROW(phi_eval(s), DivergenceError);
}

TEST(Psi, TerminatingFiveFiveAgainstDirectSumAndProduct) {
  const GQ q(mpq_class(1, 2)), b(2), c(3), d(7);
  const SeriesSpec s = p55a(q, b, c, d, 1);
  const TermRange r = term_range(s);
  ASSERT_EQ(r.kmin, -1);
  ASSERT_EQ(r.kmax, 1);
  const SeriesValue v = psi_eval(s);
  ASSERT_TRUE(v.value.is_exact());
  const GQ direct = oracle::psi_sum({b, c, d, q * q / (b * c * d), GQ(1) / q},
                                    {q / b, q / c, q / d, b * c * d / q, q * q}, q, q, -1, 1);
  EXPECT_EQ(GQ::of(v.value.exact()), direct);
  GQ prod = oracle::poch(q, q, 1) * oracle::poch(q / (b * c), q, 1) * oracle::poch(q / (b * d), q, 1) *
            oracle::poch(q / (c * d), q, 1);
  prod = prod / (oracle::poch(q / b, q, 1) * oracle::poch(q / c, q, 1) * oracle::poch(q / d, q, 1) *
                 oracle::poch(q / (b * c * d), q, 1));
  EXPECT_EQ(direct, prod);
}

TEST(Psi, TermRangeInBallModeUsesMargin) {
  const GQ q(mpq_class(1, 3));
  SeriesSpec s = p55a(q, GQ(2), GQ(5), GQ(mpq_class(7, 3)), 3);
  EXPECT_EQ(term_range(s).kmin, -3);
  EXPECT_EQ(term_range(s).kmax, 3);
  for (Scalar& x : s.numer) x = Scalar(x.to_ball(Precision{128}));
  for (Scalar& x : s.denom) x = Scalar(x.to_ball(Precision{128}));
  s.q = Scalar(s.q.to_ball(Precision{128}));
  const TermRange r = term_range(s, Precision{128});
  EXPECT_EQ(r.kmin, -3);
  EXPECT_EQ(r.kmax, 3);
  const SeriesSpec generic = make(SeriesKind::bilateral, {GQ(4)}, {GQ(mpq_class(5, 7))}, q, GQ(mpq_class(1, 2)));
  EXPECT_FALSE(term_range(generic).kmin.has_value());
  EXPECT_FALSE(term_range(generic).kmax.has_value());
}

TEST(Psi, BallAgreesWithExactOnTerminatingSpecs) {
  std::mt19937_64 rng(13);
  int checked = 0;
  for (int i = 0; i < 200 && checked < 60; ++i) {
    const GQ q = GQ(mpq_class(static_cast<long>(1 + rng() % 7), 9));
    const GQ b = oracle::random_gq(rng), c = oracle::random_gq(rng), d = oracle::random_gq(rng);
    if (b.zero() || c.zero() || d.zero()) continue;
    SeriesSpec s = p55a(q, b, c, d, static_cast<long>(rng() % 5));
    Scalar exact;
    try {
      exact = psi_eval(s).value;
    } catch (const QSeriesError&) {
      continue;
    }
    ASSERT_TRUE(exact.is_exact());
    for (Scalar& x : s.numer) x = Scalar(x.to_ball(Precision{100}));
    s.z = Scalar(s.z.to_ball(Precision{100}));
    try {
      const Scalar ball = psi_eval(s, EvalOptions{Precision{100}, {}, 100000}).value;
      EXPECT_TRUE(ball.contains(exact.exact()));
      ++checked;
    } catch (const PrecisionError&) {
    }
  }
  EXPECT_GT(checked, 30);
}

TEST(Psi, NonterminatingMatchesLongTwoSidedSum) {
  const GQ q(mpq_class(1, 3), mpq_class(1, 5));
  const GQ b(2), c(mpq_class(-3, 2)), d(mpq_class(5, 2), 1);
  const GQ z = q / (b * c * d);
  const SeriesSpec s = make(SeriesKind::bilateral, {b, c, d}, {q / b, q / c, q / d}, q, z);
  const Scalar v = psi_eval(s, EvalOptions{Precision{160}, {}, 100000}).value;
  const GQ ref = oracle::psi_sum_long({b, c, d}, {q / b, q / c, q / d}, q, z, -120, 120);
  EXPECT_TRUE(near(v, ref, tiny()));
}

TEST(Psi, UnequalParameterCountsAreRejected) {
  const GQ q(mpq_class(1, 2));
  const SeriesSpec s = make(SeriesKind::bilateral, {GQ(3), GQ(5)}, {GQ(7)}, q, GQ(mpq_class(1, 9)));
  EXPECT_THROW(psi_eval(s), DomainError);
}

TEST(Psi, DivergentSideIsRefused) {
  const GQ q(mpq_class(1, 2));
  // Backward ratio b/(a z) = 6 > 1.
  const SeriesSpec s = make(SeriesKind::bilateral, {GQ(mpq_class(1, 4))}, {GQ(mpq_class(3, 4))}, q, GQ(mpq_class(1, 2)));
  EXPECT_THROW(psi_eval(s), DivergenceError);
}

TEST(Reindex, ReflectMapsFirstSummationOntoItsMirror) {
  const GQ q(mpq_class(1, 2)), b(3), c(mpq_class(5, 2)), d(mpq_class(-7, 3));
  const SeriesSpec a = make(SeriesKind::bilateral, {b, c, d}, {q / b, q / c, q / d}, q, q / (b * c * d));
  const SeriesSpec expect = make(SeriesKind::bilateral, {b, c, d}, {q / b, q / c, q / d}, q, q * q / (b * c * d));
  const SeriesSpec r = reflect_params(a);
  ASSERT_EQ(r.numer.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(r.numer[i].exact(), expect.numer[i].exact());
    EXPECT_EQ(r.denom[i].exact(), expect.denom[i].exact());
  }
  EXPECT_EQ(r.z.exact(), expect.z.exact());
}

TEST(Reindex, ShiftReflectMapsShiftedSummationWithFactor) {
  const GQ q(mpq_class(1, 2)), b(3), c(mpq_class(5, 2)), d(mpq_class(-7, 3));
  const GQ q2 = q * q;
  const SeriesSpec from = make(SeriesKind::bilateral, {b, c, d}, {q2 / b, q2 / c, q2 / d}, q, q2 / (b * c * d));
  const ScaledSeries to = shift_reflect_params(from);
  const GQ z4 = q2 * q2 / (b * c * d);
  EXPECT_EQ(to.spec.z.exact(), z4.to_exact());
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(to.spec.numer[i].exact(), from.numer[i].exact());
  EXPECT_EQ(to.factor.exact(), (GQ(0) - q).to_exact());
  // Term by term: t_k(from) = factor * t_{-k-1}(to).
  for (long k = -6; k <= 6; ++k) {
    const GQ lhs = oracle::psi_term({b, c, d}, {q2 / b, q2 / c, q2 / d}, q, q2 / (b * c * d), k);
    const GQ rhs = GQ(0) - q * oracle::psi_term({b, c, d}, {q2 / b, q2 / c, q2 / d}, q, z4, -k - 1);
    EXPECT_EQ(lhs, rhs) << k;
  }
}

TEST(Reindex, ValueInvariantOnRandomSpecs) {
  std::mt19937_64 rng(29);
  int checked = 0;
  const EvalOptions eo{Precision{128}, {}, 100000};
  for (int i = 0; i < 2000 && checked < 50; ++i) {
    const long r = 1 + static_cast<long>(rng() % 3);
    GQ q;
    do q = GQ(mpq_class(static_cast<long>(rng() % 15) - 7, 10), mpq_class(static_cast<long>(rng() % 15) - 7, 10));
    while (q.zero() || q.re * q.re + q.im * q.im > mpq_class(64, 100));
    std::vector<GQ> a, b;
    for (long j = 0; j < r; ++j) {
      a.push_back(oracle::random_gq(rng, true, 6));
      b.push_back(oracle::random_gq(rng, true, 6));
    }
    GQ z(mpq_class(static_cast<long>(rng() % 19) - 9, 10), mpq_class(static_cast<long>(rng() % 19) - 9, 10));
    if (z.zero()) continue;
    const SeriesSpec s = make(SeriesKind::bilateral, a, b, q, z);
    Scalar v;
    try {
      v = psi_eval(s, eo).value;
    } catch (const QSeriesError&) {
      continue;
    }
    const Scalar vr = psi_eval(reflect_params(s), eo).value;
    const ScaledSeries sr = shift_reflect_params(s);
    const Scalar vs = sr.factor * psi_eval(sr.spec, eo).value;
    const Ball diff1 = (v - vr).to_ball(Precision{128});
    const Ball diff2 = (v - vs).to_ball(Precision{128});
    const Mag scale = add_up(v.abs_upper(), Mag::pow2(-60));
    EXPECT_LT(diff1.abs_upper(), mul_up(scale, Mag::pow2(-90))) << s.to_string();
    EXPECT_LT(diff2.abs_upper(), mul_up(scale, Mag::pow2(-90))) << s.to_string();
    ++checked;
  }
  EXPECT_EQ(checked, 50);
}

TEST(Reindex, RatiosSwapUnderReflection) {
  const GQ q(mpq_class(1, 2));
  const SeriesSpec s = make(SeriesKind::bilateral, {GQ(3), GQ(5)}, {GQ(mpq_class(1, 2)), GQ(7)}, q, GQ(mpq_class(1, 4)));
  const BilateralRatios a = bilateral_ratios(s);
  const BilateralRatios b = bilateral_ratios(reflect_params(s));
  EXPECT_NEAR(a.forward.to_double(), b.backward.to_double(), 1e-12);
  EXPECT_NEAR(a.backward.to_double(), b.forward.to_double(), 1e-12);
}
