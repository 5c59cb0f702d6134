// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "qseries/errors.hpp"
#include "qseries/qpoch.hpp"
#include "support/oracle.hpp"

using namespace qseries;
using oracle::GQ;

namespace {

ExactRational fr(long a, long b) { return ExactRational::fraction(a, b); }

/// Random q with 0 < |q| < 1 and a random nonzero x, both exact.
std::pair<GQ, GQ> draw(std::mt19937_64& rng) {
  GQ q;
  do q = oracle::random_gq(rng, true, 7);
  while (q.zero() || q.re * q.re + q.im * q.im >= 1);
  GQ x;
  do x = oracle::random_gq(rng, true, 9);
  while (x.zero());
  return {x, q};
}

bool has_pole(const GQ& x, const GQ& q, long n) {
  try {
    oracle::poch(x, q, n);
    return false;
  } catch (const std::domain_error&) {
    return true;
  }
}

}  // namespace

TEST(Qpoch, SmallExactValues) {
  EXPECT_EQ(qpoch(Scalar(fr(1, 2)), Scalar(fr(1, 2)), 2).exact(), fr(3, 8));
  EXPECT_EQ(qpoch(Scalar(fr(1, 3)), Scalar(fr(1, 2)), -1).exact(), ExactRational(3));
  EXPECT_EQ(qpoch(Scalar(fr(5, 7)), Scalar(fr(1, 2)), 0).exact(), ExactRational(1));
}

TEST(Qpoch, InfiniteProductMatchesLongPartialProduct) {
  GQ partial(1);
  const GQ half(mpq_class(1, 2));
  for (long k = 0; k <= 200; ++k) partial = partial * (GQ(1) - half * oracle::power(half, k));
  const Ball v = qpoch_inf(Scalar(fr(1, 2)), Scalar(fr(1, 2)), Mag::from_double(1e-30), Precision{128});
  mpz_class p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, 30);
  const mpq_class diff = v.mid_exact().re() - partial.re;
  EXPECT_LT(abs(diff), mpq_class(1, p10));
  EXPECT_LT(v.rad(), Mag::from_double(1e-30));
}

TEST(Qpoch, FactorialRatioMatchesDirectProducts) {
  const std::vector<Scalar> num{Scalar(fr(1, 2))};
  const std::vector<Scalar> den{Scalar(fr(1, 3))};
  const Scalar r = qfac_ratio(num, den, Scalar(fr(1, 2)), Order::finite(2), Precision{64}, Mag());
  ASSERT_TRUE(r.is_exact());
  EXPECT_EQ(r.exact(), fr(27, 40));
}

TEST(Qpoch, ShiftLawExact) {
  std::mt19937_64 rng(101);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    auto [x, q] = draw(rng);
    const long m = static_cast<long>(rng() % 13) - 6;
    const long n = static_cast<long>(rng() % 13) - 6;
    const GQ xm = x * oracle::power(q, m);
    if (has_pole(x, q, m + n) || has_pole(x, q, m) || has_pole(xm, q, n)) continue;
    const Scalar lhs = qpoch(Scalar(x.to_exact()), Scalar(q.to_exact()), m + n);
    const Scalar rhs = qpoch(Scalar(x.to_exact()), Scalar(q.to_exact()), m) *
                       qpoch(Scalar(xm.to_exact()), Scalar(q.to_exact()), n);
    ASSERT_TRUE(lhs.is_exact() && rhs.is_exact());
    ASSERT_EQ(lhs.exact(), rhs.exact());
    ASSERT_EQ(GQ::of(lhs.exact()), oracle::poch(x, q, m + n));
    ++checked;
  }
  EXPECT_GT(checked, 900);
}

TEST(Qpoch, ShiftLawBallsEnclose) {
  std::mt19937_64 rng(103);
  const Precision p{96};
  for (int i = 0; i < 1000; ++i) {
    auto [x, q] = draw(rng);
    const long m = static_cast<long>(rng() % 9) - 4;
    const long n = static_cast<long>(rng() % 9) - 4;
    if (has_pole(x, q, m + n)) continue;
    const Scalar bx(Ball(x.to_exact(), p));
    const Scalar bq(Ball(q.to_exact(), p));
    try {
      const Scalar v = qpoch(bx, bq, m + n);
      ASSERT_TRUE(v.contains(oracle::poch(x, q, m + n).to_exact()));
    } catch (const PrecisionError&) {
      // Within the singularity margin: refusing is the specified outcome.
    }
  }
}

TEST(Qpoch, NegativeOrderReciprocalLaw) {
  std::mt19937_64 rng(107);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    auto [x, q] = draw(rng);
    const long n = 1 + static_cast<long>(rng() % 8);
    const GQ shifted = x * oracle::power(q, -n);
    if (has_pole(x, q, -n)) {
      EXPECT_THROW(qpoch(Scalar(x.to_exact()), Scalar(q.to_exact()), -n), PoleError);
      continue;
    }
    const Scalar neg = qpoch(Scalar(x.to_exact()), Scalar(q.to_exact()), -n);
    const Scalar pos = qpoch(Scalar(shifted.to_exact()), Scalar(q.to_exact()), n);
    ASSERT_EQ((neg * pos).exact(), ExactRational(1));
    ++checked;
  }
  EXPECT_GT(checked, 900);
}

TEST(Qpoch, PolesAndNearPoles) {
  EXPECT_THROW(qpoch(Scalar(fr(1, 4)), Scalar(fr(1, 2)), -2), PoleError);
  Ball near(fr(1, 4), Precision{64});
  near.add_error(Mag::pow2(-40));
  EXPECT_THROW(qpoch(Scalar(near), Scalar(fr(1, 2)), -2), PrecisionError);
  EXPECT_THROW(qpoch_inf(Scalar(2), Scalar(fr(1, 2)), Mag::pow2(-60), Precision{64}, true), PoleError);
  EXPECT_THROW(qpoch_inf(Scalar(2), Scalar(ExactRational(1)), Mag::pow2(-60), Precision{64}), DomainError);
}

TEST(Qpoch, NumeratorZeroShortCircuits) {
  // (q^-2;q)_5 = 0, so the ratio is 0 even though (q^-3;q)_5 is also 0.
  const Scalar q(fr(1, 2));
  const std::vector<Scalar> num{Scalar(ExactRational(4))};
  const std::vector<Scalar> den{Scalar(ExactRational(8))};
  const Scalar r = qfac_ratio(num, den, q, Order::finite(5), Precision{64}, Mag());
  EXPECT_TRUE(r.is_exact_zero());
  EXPECT_THROW(qfac_ratio(den, num, q, Order::finite(3), Precision{64}, Mag()), PoleError);
}

TEST(Qpoch, InfiniteRatioAgreesWithProducts) {
  const Precision p{128};
  const Scalar q(ExactRational(mpq_class(1, 3), mpq_class(1, 4)));
  const std::vector<Scalar> num{Scalar(ExactRational(mpq_class(2), mpq_class(1)))};
  const std::vector<Scalar> den{Scalar(fr(-3, 5))};
  const Mag tol = Mag::pow2(-110);
  const Scalar r = qfac_ratio(num, den, q, Order::inf(), p, tol);
  const Ball direct = qpoch_inf(num[0], q, tol, p) / qpoch_inf(den[0], q, tol, p);
  EXPECT_TRUE(overlaps(r.ball(), direct));
  EXPECT_LT(r.radius(), Mag::pow2(-100));
}

TEST(Qpoch, RadiusShrinksWithPrecision) {
  std::mt19937_64 rng(109);
  for (int i = 0; i < 50; ++i) {
    auto [x, q] = draw(rng);
    Mag last = Mag::pow2(1000);
    for (long bits : {64L, 128L, 256L}) {
      try {
        const Ball v = qpoch_inf(Scalar(x.to_exact()), Scalar(q.to_exact()), Mag::pow2(16 - bits), Precision{bits});
        EXPECT_LE(v.rad(), last);
        last = v.rad();
      } catch (const QSeriesError&) {
        break;
      }
    }
  }
}
