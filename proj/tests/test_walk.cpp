#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "jurylab/walk.hpp"

using namespace jurylab;

namespace {

// C_{n+1} = sum_i C_i C_{n-i}
std::vector<BigInt> catalan_by_convolution(std::size_t count) {
    std::vector<BigInt> c{1};
    while (c.size() < count) {
        BigInt next = 0;
        const std::size_t n = c.size() - 1;
        for (std::size_t i = 0; i <= n; ++i) next += c[i] * c[n - i];
        c.push_back(next);
    }
    return c;
}

}  // namespace

TEST(Catalan, Examples) {
    EXPECT_EQ(catalan(0), 1);
    EXPECT_EQ(catalan(5), 42);
    EXPECT_EQ(catalan(10), 16796);
}

TEST(Catalan, MatchesConvolutionRecurrence) {
    const auto oracle = catalan_by_convolution(80);
    for (std::size_t n = 0; n < oracle.size(); ++n) ASSERT_EQ(catalan(n), oracle[n]) << n;
}

TEST(Catalan, RejectsHugeIndex) { EXPECT_THROW(catalan(100001), ValidationError); }

TEST(Border, SmallExamples) {
    const auto one = border_measure(1), two = border_measure(2);
    EXPECT_EQ(one.numerator, 6);
    EXPECT_EQ(one.denominator, 16);
    EXPECT_DOUBLE_EQ(one.value, 0.375);
    EXPECT_EQ(two.closed_form, Rational(20, 64));
    EXPECT_DOUBLE_EQ(two.value, 0.3125);
}

TEST(Border, EnumerationMatchesClosedForm) {
    for (int m = 1; m <= 10; ++m) {
        const auto pc = border_measure(m);
        ASSERT_TRUE(pc.enumerated.has_value());
        EXPECT_EQ(*pc.enumerated, pc.closed_form) << m;
    }
    EXPECT_FALSE(border_measure(13).enumerated.has_value());
}

TEST(Border, StrictlyDecreasingInsideUnitInterval) {
    double prev = 1.0;
    for (int m = 1; m <= 2000; ++m) {
        const auto pc = border_measure(m, false);
        ASSERT_GT(pc.closed_form, 0);
        ASSERT_LT(pc.closed_form, 1);
        ASSERT_LT(pc.value, prev);
        prev = pc.value;
    }
}

TEST(Border, PartialSumIdentity) {
    for (int m = 1; m <= 30; ++m) EXPECT_EQ(border_partial_sum(m), border_measure(m, false).closed_form) << m;
}

TEST(Border, StirlingAsymptote) {
    const auto pc = border_measure(10000, false);
    EXPECT_NEAR(std::sqrt(std::numbers::pi * 10000) * pc.value, 1.0, 1e-3);
    EXPECT_NEAR(pc.ratio(), 1.0, 1e-3);
    EXPECT_NEAR(pc.value, static_cast<double>(pc.closed_form), 1e-15);
}

TEST(Border, Validation) {
    EXPECT_THROW(border_measure(0), ValidationError);
    EXPECT_THROW(enumerate_border_count(13), ValidationError);
}

TEST(RandomWalk, LevelZeroIsCertain) {
    const auto e = random_walk_return(0, 0, 100, 1);
    EXPECT_DOUBLE_EQ(e.value, 1.0);
}

TEST(RandomWalk, SingleStepUp) {
    const auto e = random_walk_return(1, 1, 20000, 2);
    EXPECT_NEAR(e.value, 0.5, 3.0 * 0.5 / std::sqrt(20000.0));
    EXPECT_GT(e.half_width, 0.0);
}

TEST(RandomWalk, ParityMeansWithinHorizonNotAt) {
    // level 1 can only be hit at odd times, but horizon 2 still counts a hit at step 1
    const auto at1 = random_walk_return(1, 1, 5000, 3), at2 = random_walk_return(1, 2, 5000, 3);
    EXPECT_EQ(at1.value, at2.value);
    EXPECT_LT(at2.value, random_walk_return(1, 3, 5000, 3).value);
}

TEST(RandomWalk, RecurrentAtLongHorizon) {
    const auto e = random_walk_return(-1, 100000, 10000, 4);
    EXPECT_GE(e.value, 0.99);
    EXPECT_LT(e.value, 1.0);
}

TEST(RandomWalk, CoupledReplicasAreMonotoneInHorizon) {
    double prev = 0.0;
    for (std::int64_t h : {2, 4, 16, 64, 256, 1024, 4096}) {
        const double v = random_walk_return(2, h, 2000, 5).value;
        ASSERT_GE(v, prev);
        prev = v;
    }
}

TEST(RandomWalk, IndependentOfThreads) {
    EXPECT_EQ(random_walk_return(3, 500, 1000, 6, 1).value, random_walk_return(3, 500, 1000, 6, 4).value);
}

TEST(RandomWalk, Validation) {
    EXPECT_THROW(random_walk_return(5, 4, 100, 0), ValidationError);
    EXPECT_THROW(random_walk_return(1, 4, 99, 0), ValidationError);
}

TEST(MoaFraction, AllInformed) {
    EXPECT_DOUBLE_EQ(moa_fraction_experiment(dirac(1.0), 0.1, 0.9, 50, 100, 0).value, 1.0);
}

TEST(MoaFraction, FiniteVersionBothDirections) {
    EXPECT_GE(moa_fraction_experiment(lebesgue(), 0.1, 0.05, 10000, 200, 7).value, 0.999);
    EXPECT_LE(moa_fraction_experiment(lebesgue(), 0.1, 0.2, 10000, 200, 7).value, 0.005);
}

TEST(MoaFraction, Validation) {
    EXPECT_THROW(moa_fraction_experiment(lebesgue(), 0.5, 0.1, 10, 100, 0), ValidationError);
    EXPECT_THROW(moa_fraction_experiment(lebesgue(), 0.1, 0.1, 10, 50, 0), ValidationError);
}
