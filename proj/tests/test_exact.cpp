#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "summakit/errors.hpp"
#include "summakit/exact.hpp"

using summakit::ExactAccumulator;
using summakit::Rational;

namespace {

double wild_double(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> exp(-60, 60);
    return std::ldexp(mant(rng), exp(rng));
}

}  // namespace

TEST(Rational, ReducesAndOrders) {
    const Rational a(6, 8);
    EXPECT_EQ(a.num(), 3);
    EXPECT_EQ(a.den(), 4);
    EXPECT_EQ(Rational(1, -2), Rational(-1, 2));
    EXPECT_LT(Rational(1, 3), Rational(1, 2));
    EXPECT_EQ(Rational(100, 10000).str(), "1/100");
    EXPECT_THROW(Rational(1, 0), std::invalid_argument);
}

TEST(ExactAccumulator, MatchesGmpOnRandomSums) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        ExactAccumulator acc;
        mpq_class ref = 0;
        const int n = 1 + static_cast<int>(rng() % 200);
        for (int k = 0; k < n; ++k) {
            const double v = wild_double(rng);
            if (rng() % 3 == 0) {
                acc.subtract(v);
                ref -= oracle::exact(v);
            } else {
                acc.add(v);
                ref += oracle::exact(v);
            }
        }
        EXPECT_EQ(acc.to_double(), oracle::round_nearest(ref)) << "trial " << trial;
        EXPECT_EQ(acc.is_negative(), ref < 0);
        EXPECT_EQ(acc.is_zero(), ref == 0);

        const double a = wild_double(rng);
        const double b = wild_double(rng);
        const mpq_class prod = oracle::exact(a) * oracle::exact(b);
        const auto cmp = acc.compare_product(a, b);
        EXPECT_EQ(cmp < 0, ref < prod);
        EXPECT_EQ(cmp == 0, ref == prod);
    }
}

TEST(ExactAccumulator, CancellationIsExact) {
    ExactAccumulator acc;
    acc.add(1e30);
    acc.add(1e-30);
    acc.subtract(1e30);
    EXPECT_EQ(acc.to_double(), 1e-30);
    acc.subtract(1e-30);
    EXPECT_TRUE(acc.is_zero());
}

TEST(ExactAccumulator, TiesOnProductBoundary) {
    // 0.1 * 30 is not 3 in binary; the comparison must see the difference.
    ExactAccumulator three;
    three.add(3.0);
    const mpq_class prod = oracle::exact(0.1) * 30;
    EXPECT_EQ(three.geq_product(0.1, 30.0), mpq_class(3) >= prod);
    EXPECT_EQ(three.leq_product(0.1, 30.0), mpq_class(3) <= prod);
    ExactAccumulator half;
    half.add(0.5);
    EXPECT_EQ(half.compare_product(0.25, 2.0), std::strong_ordering::equal);
}

TEST(ExactAccumulator, AccumulatorArithmetic) {
    ExactAccumulator a;
    ExactAccumulator b;
    a.add(2.5);
    b.add(0.75);
    a += b;
    EXPECT_EQ(a.to_double(), 3.25);
    a -= b;
    a -= b;
    EXPECT_EQ(a.to_double(), 1.75);
}

TEST(ExactFreeFunctions, ProductComparisonsAgainstGmp) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 2000; ++trial) {
        const double lhs = wild_double(rng);
        const double a = wild_double(rng);
        const double b = trial % 5 == 0 ? lhs / a : wild_double(rng);
        const mpq_class prod = oracle::exact(a) * oracle::exact(b);
        EXPECT_EQ(summakit::geq_product(lhs, a, b), oracle::exact(lhs) >= prod) << lhs << " " << a << " " << b;
        EXPECT_EQ(summakit::leq_product(lhs, a, b), oracle::exact(lhs) <= prod) << lhs << " " << a << " " << b;
    }
}

TEST(CompensatedSum, BeatsNaiveSummation) {
    summakit::CompensatedSum s;
    mpq_class ref = 0;
    for (int k = 1; k <= 10000; ++k) {
        const double v = 1.0 / k;
        s.add(v);
        ref += oracle::exact(v);
    }
    EXPECT_NEAR(s.value(), ref.get_d(), 1e-15);
}
